#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nadc/config.hpp"
#include "nadc/csv.hpp"
#include "nadc/engine.hpp"
#include "nadc/recon.hpp"

namespace {

using namespace nadc;

// Options shared by every subcommand; applied on top of the preset or file.
struct CommonOpts {
    std::string preset_name;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> window;
    std::optional<double> alpha;
    std::optional<double> constant_amps;
    bool no_inhibition = false;
    bool record_membrane = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_recon_opts = true)
{
    auto* preset_opt =
        cmd->add_option("--preset", o.preset_name,
                        "built-in preset (paper-sine-50, paper-ramp-10)");
    cmd->add_option("--config", o.config_path, "config file path")
        ->excludes(preset_opt);
    cmd->add_option("--seed", o.seed,
                    "run seed; also reseeds the mismatch draw");
    cmd->add_flag("--no-inhibition", o.no_inhibition,
                  "disable the lateral inhibition policy");
    cmd->add_option("--constant", o.constant_amps,
                    "replace the input waveform with a constant current [A]");
    if (with_recon_opts) {
        cmd->add_option("--window", o.window,
                        "spike-count window in scan steps (default: one sweep)");
        cmd->add_option("--alpha", o.alpha, "low-pass coefficient per window");
    }
}

FullConfig resolve(const CommonOpts& o)
{
    FullConfig cfg;
    if (!o.config_path.empty())
        cfg = parse_config_file(o.config_path);
    else if (!o.preset_name.empty())
        cfg = preset(o.preset_name);
    else
        throw std::runtime_error("need --preset or --config");

    if (o.seed) {
        cfg.sim.seed = *o.seed;
        cfg.sim.mismatch.seed = *o.seed;
    }
    if (o.no_inhibition)
        cfg.sim.policy.enabled = false;
    if (o.constant_amps)
        cfg.sim.waveform = ConstantWave{*o.constant_amps};
    if (o.window)
        cfg.recon.window_steps = *o.window;
    if (o.alpha)
        cfg.recon.alpha = *o.alpha;
    if (o.record_membrane)
        cfg.sim.record_membrane = true;
    validate(cfg.sim);
    return cfg;
}

std::string membrane_path(const std::string& spike_path)
{
    const auto dot = spike_path.rfind('.');
    if (dot == std::string::npos || spike_path.find('/', dot) != std::string::npos)
        return spike_path + "_membrane.csv";
    return spike_path.substr(0, dot) + "_membrane" + spike_path.substr(dot);
}

double sawtooth_period_or_throw(const SimConfig& cfg)
{
    if (const auto* st = std::get_if<SawtoothWave>(&cfg.waveform))
        return st->period_seconds;
    throw std::runtime_error(
        "compensate needs a sawtooth waveform (a rising ramp to fit against)");
}

// Window indices whose span lies fully inside [t0, t1), given in steps.
std::pair<std::size_t, std::size_t> window_slice(double t0_steps,
                                                 double t1_steps,
                                                 std::int64_t window,
                                                 std::size_t n_windows)
{
    const auto w = static_cast<double>(window);
    auto lo = static_cast<std::size_t>(std::ceil(t0_steps / w));
    auto hi = static_cast<std::size_t>(std::floor(t1_steps / w));
    lo = std::min(lo, n_windows);
    hi = std::min(hi, n_windows);
    return {lo, hi};
}

int cmd_simulate(const CommonOpts& o, const std::string& out,
                 const std::string& dump_path)
{
    const FullConfig cfg = resolve(o);
    if (!dump_path.empty()) {
        std::ofstream f(dump_path);
        if (!f)
            throw std::runtime_error("cannot write " + dump_path);
        f << render_config(cfg);
    }
    const SimTrace trace = run(cfg.sim);
    write_spike_csv(trace, out);
    std::cout << "wrote " << out << " (" << trace.spikes.size() << " spikes, "
              << cfg.sim.duration_steps << " steps)\n";
    if (cfg.sim.record_membrane) {
        const std::string mpath = membrane_path(out);
        write_membrane_csv(trace, mpath);
        std::cout << "wrote " << mpath << "\n";
    }
    return 0;
}

int cmd_reconstruct(const CommonOpts& o, const std::string& out)
{
    const FullConfig cfg = resolve(o);
    const SimTrace trace = run(cfg.sim);
    const Reconstruction recon = reconstruct(trace, cfg.recon);
    write_reconstruction_csv(recon, cfg.sim.scan.scan_step_seconds, out);
    std::cout << "wrote " << out << " (" << recon.counts.values.size()
              << " windows)\n";
    std::cout << "rms_error_pct_holdout = " << format_double(recon.rms_pct_holdout)
              << "\n";
    return 0;
}

int cmd_compensate(const CommonOpts& o, const std::string& out)
{
    FullConfig cfg = resolve(o);
    const double period_s = sawtooth_period_or_throw(cfg.sim);
    const double period_steps = period_s / cfg.sim.scan.scan_step_seconds;

    // three periods: settle, fit, evaluate
    cfg.sim.duration_steps =
        static_cast<std::int64_t>(std::llround(3.0 * period_steps)) + 1;
    const SimTrace trace = run(cfg.sim);

    const std::int64_t window = resolve_window(cfg.recon, cfg.sim.scan);
    const CountSeries counts = spike_counts(trace, window);
    const auto ref = reference_series(cfg.sim.waveform, counts.values.size(),
                                      window, cfg.sim.scan.scan_step_seconds);

    // fit on the rising half of the second period
    const auto [f0, f1] = window_slice(period_steps, 1.5 * period_steps, window,
                                       counts.values.size());
    CountSeries fit_counts;
    fit_counts.window_steps = window;
    fit_counts.values.assign(counts.values.begin() + static_cast<std::ptrdiff_t>(f0),
                             counts.values.begin() + static_cast<std::ptrdiff_t>(f1));
    const std::vector<double> fit_ref(ref.begin() + static_cast<std::ptrdiff_t>(f0),
                                      ref.begin() + static_cast<std::ptrdiff_t>(f1));
    const CompensationTable table =
        fit_compensation(fit_counts, fit_ref, cfg.recon.alpha);
    write_compensation_csv(table, out);

    // evaluate on the rising half of the third period
    const auto [e0, e1] = window_slice(2.0 * period_steps, 2.5 * period_steps,
                                       window, counts.values.size());
    std::vector<double> eval_smooth(counts.values.begin() + static_cast<std::ptrdiff_t>(e0),
                                    counts.values.begin() + static_cast<std::ptrdiff_t>(e1));
    eval_smooth = lowpass(eval_smooth, cfg.recon.alpha);
    double max_abs_err = 0.0;
    const auto* st = std::get_if<SawtoothWave>(&cfg.sim.waveform);
    const double full_scale = st->max_amps - st->min_amps;
    for (std::size_t i = 0; i < eval_smooth.size(); ++i) {
        const double est =
            apply_compensation(eval_smooth[i] / table.count_scale, table);
        const double ref_norm = (ref[e0 + i] - st->min_amps) / full_scale;
        max_abs_err = std::max(max_abs_err, std::abs(est - ref_norm));
    }

    std::cout << "wrote " << out << " (" << table.breakpoints.size()
              << " breakpoints, count_scale = "
              << format_double(table.count_scale) << ")\n";
    std::cout << "max_abs_error_fresh_period = " << format_double(max_abs_err)
              << " (fraction of full scale)\n";
    return 0;
}

int cmd_calibrate(const CommonOpts& o, double target_rate)
{
    const FullConfig cfg = resolve(o);
    const double gain = calibrate_charge_gain(target_rate, cfg.sim);
    std::cout << format_double(gain) << "\n";
    return 0;
}

int cmd_montecarlo(const CommonOpts& o, int trials, const std::string& out)
{
    const FullConfig cfg = resolve(o);
    const MonteCarloReport report = monte_carlo(cfg.sim, trials, cfg.recon);
    write_montecarlo_csv(report, out);
    std::cout << "wrote " << out << "\n";
    std::cout << "trials = " << report.n_trials
              << "  mean_rms_pct = " << format_double(report.mean_pct)
              << "  std_rms_pct = " << format_double(report.std_pct) << "\n";
    return 0;
}

int cmd_decohere(const CommonOpts& o)
{
    FullConfig cfg = resolve(o);
    std::cout << "inhibition,isi_cv,burst_fraction\n";
    for (const bool enabled : {true, false}) {
        cfg.sim.policy.enabled = enabled;
        const SimTrace trace = run(cfg.sim);
        const DecoherenceMetrics m =
            decoherence_metrics(trace, cfg.sim.scan.scan_step_seconds);
        std::cout << (enabled ? "on" : "off") << ','
                  << format_double(m.isi_cv) << ','
                  << format_double(m.burst_fraction) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Behavioral simulator of a scanned integrate-and-fire "
                 "neuromorphic ADC with pulse-width-modulated lateral "
                 "inhibition"};
    app.require_subcommand(1);

    CommonOpts sim_o, rec_o, comp_o, cal_o, mc_o, dec_o;
    std::string sim_out = "spikes.csv";
    std::string sim_dump;
    std::string rec_out = "reconstruction.csv";
    std::string comp_out = "compensation.csv";
    std::string mc_out = "montecarlo.csv";
    double target_rate = 6.6e6; // spikes per second
    int trials = 30;

    auto* simulate = app.add_subcommand("simulate", "run and emit the spike CSV");
    add_common(simulate, sim_o, /*with_recon_opts=*/false);
    simulate->add_option("--out", sim_out, "spike CSV path");
    simulate->add_flag("--record-membrane", sim_o.record_membrane,
                       "also emit per-step membrane voltages");
    simulate->add_option("--dump-config", sim_dump,
                         "write the fully resolved configuration to a file");

    auto* reconstruct_cmd = app.add_subcommand(
        "reconstruct", "run, reconstruct the input from spike counts, "
                       "report holdout RMS error");
    add_common(reconstruct_cmd, rec_o);
    reconstruct_cmd->add_option("--out", rec_out, "reconstruction CSV path");

    auto* compensate = app.add_subcommand(
        "compensate", "fit the inverse ramp-response compensation table");
    add_common(compensate, comp_o);
    compensate->add_option("--out", comp_out, "compensation table CSV path");

    auto* calibrate = app.add_subcommand(
        "calibrate-gain",
        "bisect charge_gain to hit a target aggregate spike rate");
    add_common(calibrate, cal_o, /*with_recon_opts=*/false);
    calibrate->add_option("--target-rate", target_rate,
                          "target aggregate rate [spikes/s]");

    auto* montecarlo_cmd = app.add_subcommand(
        "montecarlo", "repeat the reconstruction over fresh mismatch draws");
    add_common(montecarlo_cmd, mc_o);
    montecarlo_cmd->add_option("--trials", trials, "number of trials");
    montecarlo_cmd->add_option("--out", mc_out, "per-trial CSV path");

    auto* decohere = app.add_subcommand(
        "decohere", "report isi_cv and burst_fraction, inhibition on vs off");
    add_common(decohere, dec_o, /*with_recon_opts=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_o, sim_out, sim_dump);
        if (reconstruct_cmd->parsed())
            return cmd_reconstruct(rec_o, rec_out);
        if (compensate->parsed())
            return cmd_compensate(comp_o, comp_out);
        if (calibrate->parsed())
            return cmd_calibrate(cal_o, target_rate);
        if (montecarlo_cmd->parsed())
            return cmd_montecarlo(mc_o, trials, mc_out);
        if (decohere->parsed())
            return cmd_decohere(dec_o);
    } catch (const std::exception& e) {
        std::cerr << "nadc: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
