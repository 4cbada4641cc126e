#include "nadc/stimulus.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>

namespace nadc {

namespace {

constexpr double kTwoPi = 2.0 * 3.141592653589793238462643;

struct SampleVisitor {
    double t;

    double operator()(const SineWave& w) const
    {
        return w.offset_amps +
               0.5 * w.peak_to_peak_amps *
                   std::sin(kTwoPi * w.frequency_hz * t + w.phase_rad);
    }

    double operator()(const SawtoothWave& w) const
    {
        const double half = 0.5 * w.period_seconds;
        double u = std::fmod(t, w.period_seconds);
        if (u < 0.0)
            u += w.period_seconds;
        const double span = w.max_amps - w.min_amps;
        if (u <= half)
            return w.min_amps + span * (u / half);
        return w.max_amps - span * ((u - half) / half);
    }

    double operator()(const ConstantWave& w) const { return w.amps; }

    double operator()(const SampleWave& w) const
    {
        const auto idx =
            static_cast<std::size_t>(std::floor(t / w.sample_period_seconds));
        if (idx >= w.values.size())
            throw std::out_of_range(
                "sample: waveform data exhausted at t=" + std::to_string(t) +
                " s (" + std::to_string(w.values.size()) + " samples loaded)");
        return w.values[idx];
    }
};

} // namespace

double sample(const Waveform& w, double t)
{
    if (t < 0.0)
        throw std::invalid_argument("sample: t must be >= 0");
    return std::visit(SampleVisitor{t}, w);
}

Waveform load_samples(const std::string& path, double sample_period_seconds)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_samples: cannot open " + path);

    SampleWave w;
    w.sample_period_seconds = sample_period_seconds;
    w.source_path = path;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::size_t pos = 0;
        double value = 0.0;
        try {
            value = std::stod(line, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error("load_samples: " + path + ":" +
                                     std::to_string(lineno) +
                                     ": not a number: '" + line + "'");
        }
        while (pos < line.size() &&
               (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        if (pos != line.size())
            throw std::runtime_error("load_samples: " + path + ":" +
                                     std::to_string(lineno) +
                                     ": trailing garbage: '" + line + "'");
        if (value < 0.0)
            throw std::runtime_error("load_samples: " + path + ":" +
                                     std::to_string(lineno) +
                                     ": negative current not allowed");
        w.values.push_back(value);
    }
    if (w.values.empty())
        throw std::runtime_error("load_samples: " + path + ": no samples");
    return w;
}

} // namespace nadc
