#include "nadc/csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace nadc {

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

void finish(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("write failed for " + path);
}

} // namespace

std::string format_double(double v)
{
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

void write_spike_csv(const SimTrace& trace, const std::string& path)
{
    auto out = open_out(path);
    out << "step,time_s,row,col,id\n";
    for (const auto& s : trace.spikes)
        out << s.step << ',' << format_double(s.time_seconds) << ',' << s.row
            << ',' << s.col << ',' << s.id << '\n';
    finish(out, path);
}

void write_membrane_csv(const SimTrace& trace, const std::string& path)
{
    auto out = open_out(path);
    out << "step,id,v\n";
    const auto n = static_cast<std::size_t>(trace.n_neurons());
    for (std::size_t i = 0; i < trace.membrane.size(); ++i)
        out << i / n << ',' << i % n << ','
            << format_double(trace.membrane[i]) << '\n';
    finish(out, path);
}

void write_reconstruction_csv(const Reconstruction& recon,
                              double scan_step_seconds, const std::string& path)
{
    auto out = open_out(path);
    out << "window,time_s,count,filtered,estimate,reference,abs_error\n";
    for (std::size_t i = 0; i < recon.counts.values.size(); ++i) {
        const double t =
            (static_cast<double>(i) + 0.5) *
            static_cast<double>(recon.counts.window_steps) * scan_step_seconds;
        const double err = std::abs(recon.estimate[i] - recon.reference[i]);
        out << i << ',' << format_double(t) << ',' << recon.counts.values[i]
            << ',' << format_double(recon.filtered[i]) << ','
            << format_double(recon.estimate[i]) << ','
            << format_double(recon.reference[i]) << ',' << format_double(err)
            << '\n';
    }
    finish(out, path);
}

void write_montecarlo_csv(const MonteCarloReport& report,
                          const std::string& path)
{
    auto out = open_out(path);
    out << "trial,seed,rms_pct\n";
    for (std::size_t i = 0; i < report.per_trial_rms_pct.size(); ++i)
        out << i << ',' << report.base_seed + i << ','
            << format_double(report.per_trial_rms_pct[i]) << '\n';
    finish(out, path);
}

void write_compensation_csv(const CompensationTable& table,
                            const std::string& path)
{
    auto out = open_out(path);
    out << "normalized_count,input_estimate\n";
    for (const auto& [c, r] : table.breakpoints)
        out << format_double(c) << ',' << format_double(r) << '\n';
    finish(out, path);
}

} // namespace nadc
