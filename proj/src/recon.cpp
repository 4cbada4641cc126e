#include "nadc/recon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nadc {

namespace {

double mean(const std::vector<double>& x)
{
    return std::accumulate(x.begin(), x.end(), 0.0) /
           static_cast<double>(x.size());
}

double rms(const std::vector<double>& x)
{
    double acc = 0.0;
    for (double v : x)
        acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

} // namespace

std::int64_t resolve_window(const ReconConfig& rc, const ScanConfig& scan)
{
    return rc.window_steps > 0 ? rc.window_steps : scan.n_neurons();
}

CountSeries spike_counts(const SimTrace& trace, std::int64_t window_steps)
{
    if (window_steps < 1)
        throw std::invalid_argument("spike_counts: window must be >= 1 step");

    CountSeries series;
    series.window_steps = window_steps;
    const auto n_windows =
        static_cast<std::size_t>(trace.config.duration_steps / window_steps);
    series.values.assign(n_windows, 0);
    for (const auto& spike : trace.spikes) {
        const auto w = static_cast<std::size_t>(spike.step / window_steps);
        if (w < n_windows)
            ++series.values[w];
    }
    return series;
}

std::vector<double> lowpass(const std::vector<double>& x, double alpha)
{
    if (alpha <= 0.0 || alpha > 1.0)
        throw std::invalid_argument("lowpass: alpha must be in (0, 1]");
    std::vector<double> y(x.size());
    if (x.empty())
        return y;
    y[0] = x[0];
    for (std::size_t i = 1; i < x.size(); ++i)
        y[i] = alpha * x[i] + (1.0 - alpha) * y[i - 1];
    return y;
}

std::vector<double> lowpass(const CountSeries& series, double alpha)
{
    std::vector<double> x(series.values.begin(), series.values.end());
    return lowpass(x, alpha);
}

std::pair<double, double> affine_fit(const std::vector<double>& series,
                                     const std::vector<double>& reference)
{
    if (series.size() != reference.size())
        throw std::invalid_argument("affine_fit: length mismatch");
    if (series.size() < 2)
        throw std::invalid_argument("affine_fit: need at least 2 points");

    const double ms = mean(series);
    const double mr = mean(reference);
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double dx = series[i] - ms;
        sxx += dx * dx;
        sxy += dx * (reference[i] - mr);
    }
    if (sxx == 0.0)
        throw std::invalid_argument(
            "affine_fit: series is constant, fit is degenerate");
    const double a = sxy / sxx;
    return {a, mr - a * ms};
}

CompensationTable fit_compensation(const CountSeries& ramp_counts,
                                   const std::vector<double>& ramp_reference,
                                   double alpha)
{
    if (ramp_counts.values.size() != ramp_reference.size())
        throw std::invalid_argument("fit_compensation: length mismatch");
    if (ramp_counts.values.size() < 2)
        throw std::invalid_argument("fit_compensation: need at least 2 windows");
    for (std::size_t i = 1; i < ramp_reference.size(); ++i)
        if (ramp_reference[i] < ramp_reference[i - 1])
            throw std::invalid_argument(
                "fit_compensation: reference must be a monotone rising ramp");

    const std::vector<double> smooth = lowpass(ramp_counts, alpha);
    const double c_max = *std::max_element(smooth.begin(), smooth.end());
    if (c_max <= 0.0)
        throw std::runtime_error("fit_compensation: all-zero spike counts");

    const double r_min = ramp_reference.front();
    const double r_max = ramp_reference.back();
    if (r_max <= r_min)
        throw std::invalid_argument(
            "fit_compensation: reference ramp is constant");

    // pairs in the normalized plane, sorted by count
    std::vector<std::pair<double, double>> pts;
    pts.reserve(smooth.size());
    for (std::size_t i = 0; i < smooth.size(); ++i)
        pts.emplace_back(smooth[i] / c_max,
                         (ramp_reference[i] - r_min) / (r_max - r_min));
    std::sort(pts.begin(), pts.end());

    // pool duplicate counts, then enforce monotonicity
    std::vector<double> c;
    std::vector<double> r;
    std::vector<double> w;
    for (const auto& [ci, ri] : pts) {
        if (!c.empty() && ci == c.back()) {
            r.back() = (r.back() * w.back() + ri) / (w.back() + 1.0);
            w.back() += 1.0;
        } else {
            c.push_back(ci);
            r.push_back(ri);
            w.push_back(1.0);
        }
    }
    // pool-adjacent-violators over the reference values; a merged block pools
    // its count coordinate too, so the breakpoints stay strictly increasing
    {
        std::vector<double> rw = w;
        std::size_t i = 1;
        while (i < r.size()) {
            if (r[i - 1] <= r[i]) {
                ++i;
                continue;
            }
            r[i - 1] = (r[i - 1] * rw[i - 1] + r[i] * rw[i]) /
                       (rw[i - 1] + rw[i]);
            c[i - 1] = (c[i - 1] * rw[i - 1] + c[i] * rw[i]) /
                       (rw[i - 1] + rw[i]);
            rw[i - 1] += rw[i];
            r.erase(r.begin() + static_cast<std::ptrdiff_t>(i));
            c.erase(c.begin() + static_cast<std::ptrdiff_t>(i));
            rw.erase(rw.begin() + static_cast<std::ptrdiff_t>(i));
            if (i > 1)
                --i;
        }
    }

    CompensationTable table;
    table.count_scale = c_max;
    table.breakpoints.reserve(c.size() + 2);
    if (c.front() > 0.0)
        table.breakpoints.emplace_back(0.0, r.front());
    for (std::size_t i = 0; i < c.size(); ++i)
        table.breakpoints.emplace_back(c[i], r[i]);
    if (table.breakpoints.back().first < 1.0)
        table.breakpoints.emplace_back(1.0, r.back());
    return table;
}

double apply_compensation(double x, const CompensationTable& table)
{
    const auto& bp = table.breakpoints;
    if (bp.empty())
        throw std::invalid_argument("apply_compensation: empty table");
    if (x <= bp.front().first)
        return bp.front().second;
    if (x >= bp.back().first)
        return bp.back().second;
    auto it = std::upper_bound(
        bp.begin(), bp.end(), x,
        [](double v, const std::pair<double, double>& p) { return v < p.first; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double f = (x - lo.first) / (hi.first - lo.first);
    return lo.second + f * (hi.second - lo.second);
}

std::vector<double> apply_compensation(const std::vector<double>& series,
                                       const CompensationTable& table)
{
    std::vector<double> out;
    out.reserve(series.size());
    for (double x : series)
        out.push_back(apply_compensation(x, table));
    return out;
}

double rms_error_pct(const std::vector<double>& estimate,
                     const std::vector<double>& reference)
{
    if (estimate.size() != reference.size())
        throw std::invalid_argument("rms_error_pct: length mismatch");
    if (estimate.empty())
        throw std::invalid_argument("rms_error_pct: empty series");
    const double ref_rms = rms(reference);
    if (ref_rms <= 0.0)
        throw std::runtime_error("rms_error_pct: reference RMS is zero");

    double acc = 0.0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        const double d = estimate[i] - reference[i];
        acc += d * d;
    }
    return 100.0 * std::sqrt(acc / static_cast<double>(estimate.size())) /
           ref_rms;
}

DecoherenceMetrics decoherence_metrics(const SimTrace& trace,
                                       double scan_step_seconds)
{
    if (trace.spikes.size() < 3)
        throw std::runtime_error(
            "decoherence_metrics: need at least 3 spikes, have " +
            std::to_string(trace.spikes.size()));

    // intervals in whole steps; cv is scale-free so the step duration only
    // fixes the burst threshold of two scan steps
    std::vector<double> isi;
    isi.reserve(trace.spikes.size() - 1);
    std::size_t bursts = 0;
    for (std::size_t i = 1; i < trace.spikes.size(); ++i) {
        const auto d_steps = trace.spikes[i].step - trace.spikes[i - 1].step;
        isi.push_back(static_cast<double>(d_steps) * scan_step_seconds);
        if (d_steps <= 2)
            ++bursts;
    }
    const double m = mean(isi);
    double var = 0.0;
    for (double d : isi)
        var += (d - m) * (d - m);
    var /= static_cast<double>(isi.size());

    DecoherenceMetrics out;
    out.isi_cv = std::sqrt(var) / m;
    out.burst_fraction =
        static_cast<double>(bursts) / static_cast<double>(isi.size());
    return out;
}

std::vector<double> reference_series(const Waveform& w, std::size_t n_windows,
                                     std::int64_t window_steps,
                                     double scan_step_seconds)
{
    std::vector<double> ref;
    ref.reserve(n_windows);
    for (std::size_t i = 0; i < n_windows; ++i) {
        const double t = (static_cast<double>(i) + 0.5) *
                         static_cast<double>(window_steps) * scan_step_seconds;
        ref.push_back(sample(w, t));
    }
    return ref;
}

Reconstruction reconstruct(const SimTrace& trace, const ReconConfig& rc)
{
    Reconstruction out;
    const std::int64_t window = resolve_window(rc, trace.config.scan);
    out.counts = spike_counts(trace, window);
    out.filtered = lowpass(out.counts, rc.alpha);
    out.reference =
        reference_series(trace.config.waveform, out.counts.values.size(),
                         window, trace.config.scan.scan_step_seconds);

    const std::size_t n = out.filtered.size();
    if (n < 4)
        throw std::runtime_error(
            "reconstruct: need at least 4 windows for a calibrate/score split, "
            "have " + std::to_string(n));
    const std::size_t half = n / 2;

    const std::vector<double> fit_x(out.filtered.begin(),
                                    out.filtered.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<double> fit_y(out.reference.begin(),
                                    out.reference.begin() + static_cast<std::ptrdiff_t>(half));
    std::tie(out.scale_a, out.offset_b) = affine_fit(fit_x, fit_y);

    out.estimate.reserve(n);
    for (double f : out.filtered)
        out.estimate.push_back(out.scale_a * f + out.offset_b);

    const std::vector<double> est_hold(out.estimate.begin() + static_cast<std::ptrdiff_t>(half),
                                       out.estimate.end());
    const std::vector<double> ref_hold(out.reference.begin() + static_cast<std::ptrdiff_t>(half),
                                       out.reference.end());
    out.rms_pct_holdout = rms_error_pct(est_hold, ref_hold);
    return out;
}

MonteCarloReport monte_carlo(const SimConfig& config, int n_trials,
                             const ReconConfig& rc)
{
    if (n_trials < 1)
        throw std::invalid_argument("monte_carlo: n_trials must be >= 1");
    validate(config);

    MonteCarloReport report;
    report.n_trials = n_trials;
    report.base_seed = config.seed;
    report.per_trial_rms_pct.assign(static_cast<std::size_t>(n_trials), 0.0);
    std::vector<std::string> errors(static_cast<std::size_t>(n_trials));

    // trials are independent runs with their own seeds; fan out and keep
    // results ordered by trial index
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_trials; ++i) {
        try {
            SimConfig trial = config;
            trial.seed = config.seed + static_cast<std::uint64_t>(i);
            trial.mismatch.seed = trial.seed;
            trial.record_membrane = false;
            const SimTrace trace = run(trial);
            report.per_trial_rms_pct[static_cast<std::size_t>(i)] =
                reconstruct(trace, rc).rms_pct_holdout;
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (int i = 0; i < n_trials; ++i)
        if (!errors[static_cast<std::size_t>(i)].empty())
            throw std::runtime_error("monte_carlo: trial " + std::to_string(i) +
                                     ": " + errors[static_cast<std::size_t>(i)]);

    report.mean_pct = mean(report.per_trial_rms_pct);
    double var = 0.0;
    for (double e : report.per_trial_rms_pct)
        var += (e - report.mean_pct) * (e - report.mean_pct);
    report.std_pct = std::sqrt(var / static_cast<double>(n_trials));
    return report;
}

} // namespace nadc
