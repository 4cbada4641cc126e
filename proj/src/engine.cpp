#include "nadc/engine.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nadc {

namespace {

void fail(const std::string& field, const std::string& what)
{
    throw std::invalid_argument(field + ": " + what);
}

void validate_waveform(const Waveform& w)
{
    if (const auto* s = std::get_if<SineWave>(&w)) {
        if (s->frequency_hz <= 0.0)
            fail("waveform.frequency_hz", "must be > 0");
        if (s->peak_to_peak_amps < 0.0)
            fail("waveform.peak_to_peak_amps", "must be >= 0");
        if (s->offset_amps - 0.5 * s->peak_to_peak_amps < 0.0)
            fail("waveform.offset_amps",
                 "sine dips below zero; the input is a rectified current");
    } else if (const auto* s2 = std::get_if<SawtoothWave>(&w)) {
        if (s2->period_seconds <= 0.0)
            fail("waveform.period_seconds", "must be > 0");
        if (s2->min_amps < 0.0)
            fail("waveform.min_amps", "must be >= 0");
        if (s2->max_amps < s2->min_amps)
            fail("waveform.max_amps", "must be >= min_amps");
    } else if (const auto* c = std::get_if<ConstantWave>(&w)) {
        if (c->amps < 0.0)
            fail("waveform.amps", "must be >= 0");
    } else if (const auto* sm = std::get_if<SampleWave>(&w)) {
        if (sm->sample_period_seconds <= 0.0)
            fail("waveform.sample_period_seconds", "must be > 0");
        if (sm->values.empty())
            fail("waveform.samples", "no samples loaded");
    }
}

// Duration of one waveform period in scan steps; falls back to the configured
// duration for aperiodic inputs.
std::int64_t period_steps(const SimConfig& cfg)
{
    double period = 0.0;
    if (const auto* s = std::get_if<SineWave>(&cfg.waveform))
        period = 1.0 / s->frequency_hz;
    else if (const auto* s2 = std::get_if<SawtoothWave>(&cfg.waveform))
        period = s2->period_seconds;
    else
        return cfg.duration_steps;
    return std::max<std::int64_t>(
        1, std::llround(period / cfg.scan.scan_step_seconds));
}

} // namespace

void validate(const SimConfig& cfg)
{
    if (cfg.scan.rows < 1)
        fail("scan.rows", "must be >= 1");
    if (cfg.scan.cols < 1)
        fail("scan.cols", "must be >= 1");
    if (cfg.scan.scan_step_seconds <= 0.0)
        fail("scan.scan_step_seconds", "must be > 0");
    if (cfg.scan.gen_ticks_per_step < 1)
        fail("scan.gen_ticks_per_step", "must be >= 1");

    if (cfg.neuron.charge_gain <= 0.0)
        fail("neuron.charge_gain", "must be > 0");
    if (cfg.neuron.i_exc_max <= 0.0)
        fail("neuron.i_exc_max", "must be > 0 (inf disables the clamp)");
    if (cfg.neuron.i_inh <= 0.0)
        fail("neuron.i_inh", "must be > 0");
    if (cfg.neuron.leak_tau <= 0.0)
        fail("neuron.leak_tau", "must be > 0 (inf disables leak)");
    if (cfg.neuron.v_max < 1.0)
        fail("neuron.v_max", "must be >= 1 (the threshold)");

    if (cfg.policy.min_width_ticks < 0)
        fail("policy.min_width_ticks", "must be >= 0");
    if (cfg.policy.base_width_ticks < cfg.policy.min_width_ticks)
        fail("policy.base_width_ticks", "must be >= min_width_ticks");
    if (cfg.policy.base_width_ticks > cfg.scan.gen_ticks_per_step)
        fail("policy.base_width_ticks",
             "must be <= scan.gen_ticks_per_step (one scan step of pulse)");
    if (cfg.policy.decrement_ticks < 0)
        fail("policy.decrement_ticks", "must be >= 0");
    if (cfg.policy.jitter_ticks < 0)
        fail("policy.jitter_ticks", "must be >= 0");

    if (cfg.mismatch.sigma_exc < 0.0 || cfg.mismatch.sigma_exc >= 1.0)
        fail("mismatch.sigma_exc", "practical range is [0, 1)");
    if (cfg.mismatch.sigma_inh < 0.0 || cfg.mismatch.sigma_inh >= 1.0)
        fail("mismatch.sigma_inh", "practical range is [0, 1)");
    if (cfg.mismatch.bound_lo <= 0.0)
        fail("mismatch.bound_lo", "must be > 0");
    if (cfg.mismatch.bound_lo >= 1.0 || cfg.mismatch.bound_hi <= 1.0)
        fail("mismatch.bound_lo", "bounds must straddle 1.0");

    if (cfg.duration_steps < 1)
        fail("run.duration_steps", "must be >= 1");

    validate_waveform(cfg.waveform);
}

std::vector<std::pair<double, double>> inject_mismatch(const MismatchSpec& spec,
                                                       int n, Rng& rng)
{
    if (n < 1)
        throw std::invalid_argument("inject_mismatch: n must be >= 1");

    auto draw = [&](double sigma) {
        double g;
        do {
            g = rng.gaussian(1.0, sigma);
        } while (g < spec.bound_lo || g > spec.bound_hi);
        return g;
    };

    std::vector<std::pair<double, double>> factors;
    factors.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double ge = draw(spec.sigma_exc);
        const double gi = draw(spec.sigma_inh);
        factors.emplace_back(ge, gi);
    }
    return factors;
}

Engine::Engine(const SimConfig& cfg, ExecMode mode)
    : cfg_(cfg),
      params_(cfg.neuron),
      mode_(mode),
      pending_(static_cast<std::size_t>(cfg.scan.n_neurons()) + 1),
      rng_(cfg.seed, /*stream=*/1)
{
    validate(cfg_);
    // The generator tick is tied to the scan clocking; the standalone field
    // in NeuronParams only matters when the neuron ops are driven directly.
    params_.tick_seconds = cfg_.scan.tick_seconds();
    cfg_.neuron.tick_seconds = params_.tick_seconds;

    const int n = cfg_.scan.n_neurons();
    neurons_.resize(static_cast<std::size_t>(n));
    Rng mismatch_rng(cfg_.mismatch.seed, /*stream=*/2);
    const auto factors = inject_mismatch(cfg_.mismatch, n, mismatch_rng);
    for (int i = 0; i < n; ++i) {
        neurons_[i].g_exc = factors[i].first;
        neurons_[i].g_inh = factors[i].second;
    }
}

std::optional<SpikeEvent> Engine::step()
{
    const double t = static_cast<double>(step_) * cfg_.scan.scan_step_seconds;
    const double i_in = sample(cfg_.waveform, t);

    // deliver pulses due this step; any lateral hit marks its target
    auto& due = pending_[static_cast<std::size_t>(step_ % static_cast<std::int64_t>(pending_.size()))];
    for (const auto& ev : due) {
        auto& target = neurons_[static_cast<std::size_t>(ev.target_id)];
        target = apply_pulse(target, params_, ev.width_ticks, ev.is_self_reset);
        if (!ev.is_self_reset)
            target.inhibited = true;
    }
    due.clear();

    integrate_all(neurons_, params_, i_in, cfg_.scan.scan_step_seconds, mode_);

    std::optional<SpikeEvent> spike;
    const int selected = linear_id(cursor_, cfg_.scan);
    auto& sel = neurons_[static_cast<std::size_t>(selected)];
    if (at_threshold(sel)) {
        spike = SpikeEvent{step_, t, cursor_.row, cursor_.col, selected};
        const auto events =
            handle_fire(sel.inhibited, cfg_.policy, selected, step_,
                        cfg_.scan.n_neurons(), cfg_.scan.gen_ticks_per_step,
                        rng_);
        for (const auto& ev : events) {
            if (ev.is_self_reset) {
                // the firer's reset happens within its own slot
                sel = apply_pulse(sel, params_, ev.width_ticks, true);
            } else {
                pending_[static_cast<std::size_t>(
                             ev.delivery_step %
                             static_cast<std::int64_t>(pending_.size()))]
                    .push_back(ev);
            }
        }
        sel.inhibited = false;
    }

    cursor_ = advance(cursor_, cfg_.scan);
    ++step_;
    return spike;
}

SimTrace run(const SimConfig& cfg, ExecMode mode)
{
    Engine engine(cfg, mode);

    SimTrace trace;
    trace.config = engine.config();
    trace.seed = cfg.seed;
    const int n = cfg.scan.n_neurons();
    trace.g_exc.reserve(static_cast<std::size_t>(n));
    trace.g_inh.reserve(static_cast<std::size_t>(n));
    for (const auto& s : engine.neurons()) {
        trace.g_exc.push_back(s.g_exc);
        trace.g_inh.push_back(s.g_inh);
    }
    if (cfg.record_membrane)
        trace.membrane.reserve(static_cast<std::size_t>(cfg.duration_steps) *
                               static_cast<std::size_t>(n));

    for (std::int64_t s = 0; s < cfg.duration_steps; ++s) {
        if (auto spike = engine.step())
            trace.spikes.push_back(*spike);
        if (cfg.record_membrane)
            for (const auto& st : engine.neurons())
                trace.membrane.push_back(st.v);
    }
    return trace;
}

double aggregate_rate(const SimConfig& cfg, double charge_gain)
{
    SimConfig probe = cfg;
    probe.neuron.charge_gain = charge_gain;
    probe.duration_steps = period_steps(cfg);
    probe.record_membrane = false;
    const SimTrace trace = run(probe);
    const double seconds =
        static_cast<double>(probe.duration_steps) * cfg.scan.scan_step_seconds;
    return static_cast<double>(trace.spikes.size()) / seconds;
}

double calibrate_charge_gain(double target_rate_hz, const SimConfig& base)
{
    if (target_rate_hz <= 0.0)
        throw std::invalid_argument(
            "calibrate_charge_gain: target rate must be > 0");
    validate(base);

    const double tol = 0.01 * target_rate_hz;
    const double k0 =
        base.neuron.charge_gain > 0.0 ? base.neuron.charge_gain : 1.0;

    auto report = [&](double lo, double hi, double rlo, double rhi) {
        std::ostringstream os;
        os << "calibrate_charge_gain: target " << target_rate_hz
           << " spikes/s unreachable; bracket [" << lo << ", " << hi
           << "] achieves [" << rlo << ", " << rhi << "] spikes/s";
        return std::runtime_error(os.str());
    };

    // grow a bracket around the initial gain
    double k_hi = k0;
    double r_hi = aggregate_rate(base, k_hi);
    for (int i = 0; r_hi < target_rate_hz; ++i) {
        if (i >= 60)
            throw report(k0, k_hi, aggregate_rate(base, k0), r_hi);
        k_hi *= 2.0;
        r_hi = aggregate_rate(base, k_hi);
    }
    double k_lo = k0;
    double r_lo = aggregate_rate(base, k_lo);
    for (int i = 0; r_lo > target_rate_hz; ++i) {
        if (i >= 60)
            throw report(k_lo, k0, r_lo, aggregate_rate(base, k0));
        k_lo /= 2.0;
        r_lo = aggregate_rate(base, k_lo);
    }

    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (k_lo + k_hi);
        const double r = aggregate_rate(base, mid);
        if (std::abs(r - target_rate_hz) <= tol)
            return mid;
        if (r < target_rate_hz)
            k_lo = mid;
        else
            k_hi = mid;
        if ((k_hi - k_lo) <= 1e-12 * k_hi)
            break;
    }
    throw report(k_lo, k_hi, aggregate_rate(base, k_lo),
                 aggregate_rate(base, k_hi));
}

} // namespace nadc
