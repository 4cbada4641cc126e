#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nadc/engine.hpp"

namespace nadc {

// Spike counts over consecutive windows of the trace. The default window is
// one full array sweep, the frame in which every neuron is polled once.
struct CountSeries {
    std::int64_t window_steps = 1;
    std::vector<std::int64_t> values;
    double start_time_seconds = 0.0;
};

// Monotone piecewise-linear map from normalized spike count to normalized
// input estimate; the inverse of the array's smoothed ramp response.
// count_scale is the raw smoothed-count maximum the fit normalized by, so
// fresh data can be brought into the same [0, 1] domain.
struct CompensationTable {
    std::vector<std::pair<double, double>> breakpoints; // (count, estimate)
    double count_scale = 1.0;
};

struct MonteCarloReport {
    std::vector<double> per_trial_rms_pct;
    double mean_pct = 0.0;
    double std_pct = 0.0; // population
    int n_trials = 0;
    std::uint64_t base_seed = 0;
};

struct DecoherenceMetrics {
    double isi_cv = 0.0;         // std/mean of global inter-spike intervals
    double burst_fraction = 0.0; // fraction of ISIs <= 2 scan steps
};

// Reconstruction settings shared by the CLI and the Monte Carlo harness.
struct ReconConfig {
    std::int64_t window_steps = 0; // <= 0 resolves to one sweep
    double alpha = 0.1;            // low-pass coefficient per window
};

// Everything the reconstruction pipeline produces for one trace. The affine
// scaling is fitted on the first half of the windows and the error is scored
// on the held-out second half.
struct Reconstruction {
    CountSeries counts;
    std::vector<double> filtered;
    std::vector<double> estimate;  // a*filtered + b, amperes
    std::vector<double> reference; // input waveform at window midpoints
    double scale_a = 0.0;
    double offset_b = 0.0;
    double rms_pct_holdout = 0.0;
};

CountSeries spike_counts(const SimTrace& trace, std::int64_t window_steps);

std::vector<double> lowpass(const std::vector<double>& x, double alpha);
std::vector<double> lowpass(const CountSeries& series, double alpha);

// Least-squares (a, b) minimizing sum((a*series + b - reference)^2).
// A constant series makes the normal equations degenerate and is rejected.
std::pair<double, double> affine_fit(const std::vector<double>& series,
                                     const std::vector<double>& reference);

// Builds the compensation table from a ramp run: smooth the counts, normalize
// them to their maximum, normalize the (monotone rising) reference to [0, 1],
// then fit a monotone map count -> input with pool-adjacent-violators and
// extend the ends so the table covers [0, 1].
CompensationTable fit_compensation(const CountSeries& ramp_counts,
                                   const std::vector<double>& ramp_reference,
                                   double alpha = 1.0);

// Piecewise-linear interpolation through the table; inputs outside [0, 1]
// clamp to the table ends.
std::vector<double> apply_compensation(const std::vector<double>& series,
                                       const CompensationTable& table);
double apply_compensation(double x, const CompensationTable& table);

// 100 * RMS(estimate - reference) / RMS(reference).
double rms_error_pct(const std::vector<double>& estimate,
                     const std::vector<double>& reference);

// Needs at least 3 spikes to form two intervals.
DecoherenceMetrics decoherence_metrics(const SimTrace& trace,
                                       double scan_step_seconds);

// Input waveform sampled at window midpoints, the reference the
// reconstruction is scored against.
std::vector<double> reference_series(const Waveform& w, std::size_t n_windows,
                                     std::int64_t window_steps,
                                     double scan_step_seconds);

// Full pipeline: counts -> low-pass -> affine fit on the first half ->
// error on the second half.
Reconstruction reconstruct(const SimTrace& trace, const ReconConfig& rc);

// Runs the pipeline n_trials times with seeds base_seed + i (fresh mismatch
// every trial). Trials execute concurrently; the report is ordered by trial
// index and deterministic regardless of scheduling.
MonteCarloReport monte_carlo(const SimConfig& config, int n_trials,
                             const ReconConfig& rc);

std::int64_t resolve_window(const ReconConfig& rc, const ScanConfig& scan);

} // namespace nadc
