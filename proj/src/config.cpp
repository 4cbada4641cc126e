#include "nadc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nadc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct Entry {
    std::string value;
    int line = 0;
    bool consumed = false;
};

// Flat view of the file: "section.key" -> last assignment wins is NOT
// allowed; duplicate keys are rejected.
class KeyMap {
public:
    KeyMap(std::string origin) : origin_(std::move(origin)) {}

    void insert(const std::string& key, const std::string& value, int line)
    {
        auto [it, fresh] = entries_.try_emplace(key, Entry{value, line});
        if (!fresh)
            fail(line, key, "duplicate key (first set on line " +
                                std::to_string(it->second.line) + ")");
    }

    [[noreturn]] void fail(int line, const std::string& key,
                           const std::string& what) const
    {
        std::ostringstream os;
        os << origin_;
        if (line > 0)
            os << ":" << line;
        os << ": " << key << ": " << what;
        throw std::runtime_error(os.str());
    }

    const Entry* find(const std::string& key)
    {
        auto it = entries_.find(key);
        if (it == entries_.end())
            return nullptr;
        it->second.consumed = true;
        return &it->second;
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    int line_of(const std::string& key) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? 0 : it->second.line;
    }

    void reject_unconsumed() const
    {
        for (const auto& [key, entry] : entries_)
            if (!entry.consumed)
                fail(entry.line, key, "unknown key");
    }

    // typed getters; absent keys keep the preset/default value
    void get(const std::string& key, double& out)
    {
        if (const Entry* e = find(key))
            out = parse_double(key, *e);
    }
    void get(const std::string& key, int& out)
    {
        if (const Entry* e = find(key))
            out = static_cast<int>(parse_int(key, *e, INT32_MIN, INT32_MAX));
    }
    void get(const std::string& key, std::int64_t& out)
    {
        if (const Entry* e = find(key))
            out = parse_int(key, *e, INT64_MIN, INT64_MAX);
    }
    void get(const std::string& key, std::uint64_t& out)
    {
        if (const Entry* e = find(key)) {
            std::uint64_t v = 0;
            const std::string s = trim(e->value);
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size())
                fail(e->line, key, "expected a non-negative integer, got '" +
                                       e->value + "'");
            out = v;
        }
    }
    void get(const std::string& key, bool& out)
    {
        if (const Entry* e = find(key)) {
            const std::string s = trim(e->value);
            if (s == "true" || s == "1")
                out = true;
            else if (s == "false" || s == "0")
                out = false;
            else
                fail(e->line, key, "expected true/false, got '" + e->value + "'");
        }
    }
    void get(const std::string& key, std::string& out)
    {
        if (const Entry* e = find(key))
            out = trim(e->value);
    }

    double parse_double(const std::string& key, const Entry& e)
    {
        const std::string s = trim(e.value);
        if (s == "inf" || s == "+inf" || s == "infinity")
            return kInf;
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument("trailing garbage");
            return v;
        } catch (const std::exception&) {
            fail(e.line, key, "expected a number, got '" + e.value + "'");
        }
    }

    std::int64_t parse_int(const std::string& key, const Entry& e,
                           std::int64_t lo, std::int64_t hi)
    {
        const std::string s = trim(e.value);
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || v < lo || v > hi)
            fail(e.line, key, "expected an integer, got '" + e.value + "'");
        return v;
    }

    const std::string& origin() const { return origin_; }

private:
    std::string origin_;
    std::map<std::string, Entry> entries_;
};

const char* const kSections[] = {"scan",     "neuron", "policy", "waveform",
                                 "mismatch", "run",    "recon"};

KeyMap tokenize(const std::string& text, const std::string& origin)
{
    KeyMap map(origin);
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                map.fail(lineno, line, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const char* s : kSections)
                known = known || section == s;
            if (!known)
                map.fail(lineno, section, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            map.fail(lineno, line, "expected key = value");
        if (section.empty())
            map.fail(lineno, line, "key outside any [section]");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            map.fail(lineno, line, "empty key");
        map.insert(section + "." + key, trim(line.substr(eq + 1)), lineno);
    }
    return map;
}

Waveform build_waveform(KeyMap& map)
{
    std::string kind = "constant";
    if (const Entry* e = map.find("waveform.kind"))
        kind = trim(e->value);

    if (kind == "sine") {
        SineWave w;
        map.get("waveform.offset_amps", w.offset_amps);
        map.get("waveform.peak_to_peak_amps", w.peak_to_peak_amps);
        map.get("waveform.frequency_hz", w.frequency_hz);
        map.get("waveform.phase_rad", w.phase_rad);
        return w;
    }
    if (kind == "sawtooth") {
        SawtoothWave w;
        map.get("waveform.min_amps", w.min_amps);
        map.get("waveform.max_amps", w.max_amps);
        map.get("waveform.period_seconds", w.period_seconds);
        return w;
    }
    if (kind == "constant") {
        ConstantWave w;
        map.get("waveform.amps", w.amps);
        return w;
    }
    if (kind == "samples") {
        std::string path;
        double period = 0.0;
        map.get("waveform.path", path);
        map.get("waveform.sample_period_seconds", period);
        if (path.empty())
            map.fail(map.line_of("waveform.kind"), "waveform.path",
                     "required for kind = samples");
        if (period <= 0.0)
            map.fail(map.line_of("waveform.sample_period_seconds"),
                     "waveform.sample_period_seconds", "must be > 0");
        return load_samples(path, period);
    }
    map.fail(map.line_of("waveform.kind"), "waveform.kind",
             "expected sine|sawtooth|constant|samples, got '" + kind + "'");
}

FullConfig build(KeyMap& map, FullConfig cfg)
{
    map.get("scan.rows", cfg.sim.scan.rows);
    map.get("scan.cols", cfg.sim.scan.cols);
    map.get("scan.scan_step_seconds", cfg.sim.scan.scan_step_seconds);
    map.get("scan.gen_ticks_per_step", cfg.sim.scan.gen_ticks_per_step);

    map.get("neuron.charge_gain", cfg.sim.neuron.charge_gain);
    map.get("neuron.i_exc_max", cfg.sim.neuron.i_exc_max);
    map.get("neuron.i_inh", cfg.sim.neuron.i_inh);
    map.get("neuron.leak_tau", cfg.sim.neuron.leak_tau);
    map.get("neuron.v_max", cfg.sim.neuron.v_max);

    map.get("policy.enabled", cfg.sim.policy.enabled);
    map.get("policy.base_width_ticks", cfg.sim.policy.base_width_ticks);
    map.get("policy.decrement_ticks", cfg.sim.policy.decrement_ticks);
    map.get("policy.min_width_ticks", cfg.sim.policy.min_width_ticks);
    map.get("policy.jitter_ticks", cfg.sim.policy.jitter_ticks);
    if (const Entry* e = map.find("policy.fanout")) {
        const std::string s = trim(e->value);
        if (s == "all") {
            cfg.sim.policy.fanout = kFanoutAll;
        } else {
            const auto v = map.parse_int("policy.fanout", *e, 0, INT32_MAX);
            cfg.sim.policy.fanout = static_cast<int>(v);
        }
    }

    cfg.sim.waveform = build_waveform(map);

    map.get("mismatch.sigma_exc", cfg.sim.mismatch.sigma_exc);
    map.get("mismatch.sigma_inh", cfg.sim.mismatch.sigma_inh);
    map.get("mismatch.bound_lo", cfg.sim.mismatch.bound_lo);
    map.get("mismatch.bound_hi", cfg.sim.mismatch.bound_hi);
    map.get("mismatch.seed", cfg.sim.mismatch.seed);

    map.get("run.duration_steps", cfg.sim.duration_steps);
    map.get("run.seed", cfg.sim.seed);
    map.get("run.record_membrane", cfg.sim.record_membrane);

    map.get("recon.window_steps", cfg.recon.window_steps);
    map.get("recon.alpha", cfg.recon.alpha);

    map.reject_unconsumed();

    // structural invariants; attach the line when the key was set explicitly
    try {
        validate(cfg.sim);
        if (cfg.recon.alpha <= 0.0 || cfg.recon.alpha > 1.0)
            throw std::invalid_argument("recon.alpha: must be in (0, 1]");
    } catch (const std::invalid_argument& e) {
        const std::string msg(e.what());
        const auto colon = msg.find(':');
        const std::string key = colon == std::string::npos
                                    ? std::string()
                                    : msg.substr(0, colon);
        throw std::runtime_error(map.origin() +
                                 (map.line_of(key) > 0
                                      ? ":" + std::to_string(map.line_of(key))
                                      : std::string()) +
                                 ": " + msg);
    }

    // generator tick is derived, never a key
    cfg.sim.neuron.tick_seconds = cfg.sim.scan.tick_seconds();
    return cfg;
}

std::string fmt(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::int64_t v) { return std::to_string(v); }
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }

} // namespace

FullConfig preset(const std::string& name)
{
    if (name == "paper-ramp-10") {
        // 1x10 chain driven by the 0..100 nA / 50 us sawtooth, clocked at the
        // circuit rates (30 ns column shift, 10 generator ticks per step).
        // charge_gain is the calibrated value reproducing 6.6 spikes/us.
        FullConfig cfg;
        cfg.sim.scan = {1, 10, 30e-9, 10};
        cfg.sim.neuron.charge_gain = 2.1908e13;
        cfg.sim.neuron.i_exc_max = 800e-9;
        cfg.sim.neuron.i_inh = 4e-6;
        cfg.sim.neuron.leak_tau = kInf;
        cfg.sim.neuron.v_max = 2.0;
        cfg.sim.policy = InhibitionPolicy{};
        cfg.sim.waveform = SawtoothWave{0.0, 100e-9, 50e-6};
        cfg.sim.mismatch = MismatchSpec{0.0, 0.0, 0.1, 2.0, 1};
        cfg.sim.duration_steps = 5001; // three sawtooth periods
        cfg.sim.seed = 1;
        cfg.recon = ReconConfig{0, 0.1};
        cfg.sim.neuron.tick_seconds = cfg.sim.scan.tick_seconds();
        return cfg;
    }
    if (name == "paper-sine-50") {
        // 1x50 chain, 1 uA pp sine on a 2 uA offset, one sine period per
        // 2000 sweeps. The gain makes one sweep at the offset current raise
        // the membrane by 0.1, so a neuron at the offset fires about every
        // ten sweeps. The charge clamp is out of the picture here.
        FullConfig cfg;
        cfg.sim.scan = {1, 50, 30e-9, 10};
        const double sweep = cfg.sim.scan.sweep_seconds();
        cfg.sim.neuron.charge_gain = 0.1 / (2e-6 * sweep);
        cfg.sim.neuron.i_exc_max = kInf;
        cfg.sim.neuron.i_inh = 1e-3;
        cfg.sim.neuron.leak_tau = kInf;
        cfg.sim.neuron.v_max = 2.0;
        cfg.sim.policy = InhibitionPolicy{};
        cfg.sim.waveform = SineWave{2e-6, 1e-6, 1.0 / (2000.0 * sweep), 0.0};
        cfg.sim.mismatch = MismatchSpec{0.20, 0.30, 0.1, 2.0, 1};
        cfg.sim.duration_steps = 2000 * 50; // one sine period
        cfg.sim.seed = 1;
        cfg.recon = ReconConfig{0, 0.1};
        cfg.sim.neuron.tick_seconds = cfg.sim.scan.tick_seconds();
        return cfg;
    }
    throw std::runtime_error("unknown preset '" + name + "' (available: " +
                             "paper-sine-50, paper-ramp-10)");
}

std::vector<std::string> preset_names()
{
    return {"paper-sine-50", "paper-ramp-10"};
}

FullConfig parse_config_text(const std::string& text, const std::string& origin)
{
    KeyMap map = tokenize(text, origin);
    return build(map, FullConfig{});
}

FullConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string render_config(const FullConfig& cfg)
{
    std::ostringstream os;
    os << "[scan]\n";
    os << "rows = " << fmt(cfg.sim.scan.rows) << "\n";
    os << "cols = " << fmt(cfg.sim.scan.cols) << "\n";
    os << "scan_step_seconds = " << fmt(cfg.sim.scan.scan_step_seconds) << "\n";
    os << "gen_ticks_per_step = " << fmt(cfg.sim.scan.gen_ticks_per_step)
       << "\n";

    os << "\n[neuron]\n";
    os << "charge_gain = " << fmt(cfg.sim.neuron.charge_gain) << "\n";
    os << "i_exc_max = " << fmt(cfg.sim.neuron.i_exc_max) << "\n";
    os << "i_inh = " << fmt(cfg.sim.neuron.i_inh) << "\n";
    os << "leak_tau = " << fmt(cfg.sim.neuron.leak_tau) << "\n";
    os << "v_max = " << fmt(cfg.sim.neuron.v_max) << "\n";

    os << "\n[policy]\n";
    os << "enabled = " << fmt(cfg.sim.policy.enabled) << "\n";
    os << "base_width_ticks = " << fmt(cfg.sim.policy.base_width_ticks) << "\n";
    os << "decrement_ticks = " << fmt(cfg.sim.policy.decrement_ticks) << "\n";
    os << "min_width_ticks = " << fmt(cfg.sim.policy.min_width_ticks) << "\n";
    os << "jitter_ticks = " << fmt(cfg.sim.policy.jitter_ticks) << "\n";
    os << "fanout = "
       << (cfg.sim.policy.fanout < 0 ? std::string("all")
                                     : fmt(cfg.sim.policy.fanout))
       << "\n";

    os << "\n[waveform]\n";
    if (const auto* s = std::get_if<SineWave>(&cfg.sim.waveform)) {
        os << "kind = sine\n";
        os << "offset_amps = " << fmt(s->offset_amps) << "\n";
        os << "peak_to_peak_amps = " << fmt(s->peak_to_peak_amps) << "\n";
        os << "frequency_hz = " << fmt(s->frequency_hz) << "\n";
        os << "phase_rad = " << fmt(s->phase_rad) << "\n";
    } else if (const auto* st = std::get_if<SawtoothWave>(&cfg.sim.waveform)) {
        os << "kind = sawtooth\n";
        os << "min_amps = " << fmt(st->min_amps) << "\n";
        os << "max_amps = " << fmt(st->max_amps) << "\n";
        os << "period_seconds = " << fmt(st->period_seconds) << "\n";
    } else if (const auto* c = std::get_if<ConstantWave>(&cfg.sim.waveform)) {
        os << "kind = constant\n";
        os << "amps = " << fmt(c->amps) << "\n";
    } else if (const auto* sm = std::get_if<SampleWave>(&cfg.sim.waveform)) {
        if (sm->source_path.empty())
            throw std::runtime_error(
                "render_config: sample waveform has no source path");
        os << "kind = samples\n";
        os << "path = " << sm->source_path << "\n";
        os << "sample_period_seconds = " << fmt(sm->sample_period_seconds)
           << "\n";
    }

    os << "\n[mismatch]\n";
    os << "sigma_exc = " << fmt(cfg.sim.mismatch.sigma_exc) << "\n";
    os << "sigma_inh = " << fmt(cfg.sim.mismatch.sigma_inh) << "\n";
    os << "bound_lo = " << fmt(cfg.sim.mismatch.bound_lo) << "\n";
    os << "bound_hi = " << fmt(cfg.sim.mismatch.bound_hi) << "\n";
    os << "seed = " << fmt(cfg.sim.mismatch.seed) << "\n";

    os << "\n[run]\n";
    os << "duration_steps = " << fmt(cfg.sim.duration_steps) << "\n";
    os << "seed = " << fmt(cfg.sim.seed) << "\n";
    os << "record_membrane = " << fmt(cfg.sim.record_membrane) << "\n";

    os << "\n[recon]\n";
    os << "window_steps = " << fmt(cfg.recon.window_steps) << "\n";
    os << "alpha = " << fmt(cfg.recon.alpha) << "\n";
    return os.str();
}

} // namespace nadc
