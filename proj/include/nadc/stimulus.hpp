#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nadc {

// Input current waveforms. All neurons share the single input port, so one
// waveform drives the whole array. Currents are rectified: every variant must
// stay >= 0 over the simulated horizon.

struct SineWave {
    double offset_amps = 0.0;
    double peak_to_peak_amps = 0.0;
    double frequency_hz = 1.0;
    double phase_rad = 0.0;
};

// Symmetric triangle: linear rise from min to max over the first half period,
// linear fall back over the second, repeating.
struct SawtoothWave {
    double min_amps = 0.0;
    double max_amps = 0.0;
    double period_seconds = 1.0;
};

struct ConstantWave {
    double amps = 0.0;
};

// Zero-order hold over an externally supplied sample list.
struct SampleWave {
    std::vector<double> values;
    double sample_period_seconds = 1.0;
    std::string source_path; // kept so a parsed config can be re-rendered
};

using Waveform = std::variant<SineWave, SawtoothWave, ConstantWave, SampleWave>;

// Instantaneous current at time t. Throws std::out_of_range when a SampleWave
// is asked past its last sample (the run horizon exceeded the data).
double sample(const Waveform& w, double t);

// Reads one ampere value per line (decimal or scientific). Rejects empty
// files, non-numeric lines and negative values, naming the offending line.
Waveform load_samples(const std::string& path, double sample_period_seconds);

} // namespace nadc
