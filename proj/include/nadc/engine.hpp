#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "nadc/inhibition.hpp"
#include "nadc/kernels.hpp"
#include "nadc/neuron.hpp"
#include "nadc/rng.hpp"
#include "nadc/scan.hpp"
#include "nadc/stimulus.hpp"

namespace nadc {

// Fixed per-device gain variation, frozen at the start of a run.
struct MismatchSpec {
    double sigma_exc = 0.20; // charge-path gain spread
    double sigma_inh = 0.30; // discharge-path gain spread
    double bound_lo = 0.1;   // truncation interval for the factors
    double bound_hi = 2.0;
    std::uint64_t seed = 1;
};

struct SimConfig {
    ScanConfig scan;
    NeuronParams neuron;
    InhibitionPolicy policy;
    Waveform waveform = ConstantWave{0.0};
    MismatchSpec mismatch;
    std::int64_t duration_steps = 1;
    std::uint64_t seed = 1; // pulse-jitter stream
    bool record_membrane = false;
};

struct SpikeEvent {
    std::int64_t step = 0;
    double time_seconds = 0.0;
    int row = 0;
    int col = 0;
    int id = 0;
};

struct SimTrace {
    std::vector<SpikeEvent> spikes; // strictly ordered by step, <= 1 per step
    std::vector<double> membrane;   // step-major [step][id], only when recorded
    std::vector<double> g_exc;      // mismatch factors as realized
    std::vector<double> g_inh;
    SimConfig config; // echo of the run configuration
    std::uint64_t seed = 0;

    int n_neurons() const { return config.scan.n_neurons(); }
};

// Throws std::invalid_argument naming the offending field when any structural
// invariant is violated (non-positive dimensions, clamp/ramp bounds, waveform
// that dips below zero, ...).
void validate(const SimConfig& cfg);

// Per-neuron (g_exc, g_inh), each drawn from N(1, sigma) and redrawn until it
// lands inside [bound_lo, bound_hi]. Factors stay fixed for a whole run.
std::vector<std::pair<double, double>> inject_mismatch(const MismatchSpec& spec,
                                                       int n, Rng& rng);

// Deterministic clocked loop: one scan step per call. Within a step the
// phases are fixed — sample input, deliver due pulses, integrate the array,
// threshold-check the selected neuron, advance the cursor. Only the selected
// neuron may spike, so there is at most one spike per step.
class Engine {
public:
    explicit Engine(const SimConfig& cfg, ExecMode mode = ExecMode::Auto);

    // Executes one step; returns the spike emitted in it, if any.
    std::optional<SpikeEvent> step();

    std::int64_t now() const { return step_; }
    const std::vector<NeuronState>& neurons() const { return neurons_; }
    ScanCursor cursor() const { return cursor_; }
    const SimConfig& config() const { return cfg_; }

private:
    SimConfig cfg_;
    NeuronParams params_; // tick_seconds resolved from the scan clocking
    ExecMode mode_;
    std::vector<NeuronState> neurons_;
    std::vector<std::vector<PulseEvent>> pending_; // ring keyed by step % size
    ScanCursor cursor_;
    std::int64_t step_ = 0;
    Rng rng_;
};

// Runs the full configured duration. The trace is a pure function of the
// configuration: identical (config, seed) gives a bit-identical trace.
SimTrace run(const SimConfig& cfg, ExecMode mode = ExecMode::Auto);

// Bisects charge_gain until the mean aggregate spike rate over one waveform
// period is within 1% of target_rate_hz (spikes per second). Relies on the
// rate being non-decreasing in the gain. Throws std::runtime_error with the
// bracket and achieved rates when the target cannot be reached.
double calibrate_charge_gain(double target_rate_hz, const SimConfig& base);

// Aggregate spike rate (spikes per second) of a config over one waveform
// period, or over duration_steps for aperiodic waveforms. calibrate's probe,
// exposed for the monotonicity checks.
double aggregate_rate(const SimConfig& cfg, double charge_gain);

} // namespace nadc
