#pragma once

#include <string>

#include "nadc/engine.hpp"
#include "nadc/recon.hpp"

namespace nadc {

// CSV writers for external plotting. Headers are fixed; floats are emitted
// shortest-round-trip so a reader recovers the exact values. All writers
// throw std::runtime_error naming the path on I/O failure.

// step,time_s,row,col,id
void write_spike_csv(const SimTrace& trace, const std::string& path);

// step,id,v — requires a trace recorded with record_membrane
void write_membrane_csv(const SimTrace& trace, const std::string& path);

// window,time_s,count,filtered,estimate,reference,abs_error
void write_reconstruction_csv(const Reconstruction& recon,
                              double scan_step_seconds,
                              const std::string& path);

// trial,seed,rms_pct
void write_montecarlo_csv(const MonteCarloReport& report,
                          const std::string& path);

// normalized_count,input_estimate
void write_compensation_csv(const CompensationTable& table,
                            const std::string& path);

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

} // namespace nadc
