#pragma once

#include <string>
#include <vector>

#include "nadc/engine.hpp"
#include "nadc/recon.hpp"

namespace nadc {

// A run's full configuration: the simulation itself plus the reconstruction
// settings the CLI commands share.
struct FullConfig {
    SimConfig sim;
    ReconConfig recon;
};

// Built-in experiment presets, expressed in the same key space as config
// files (render_config dumps them verbatim).
//   paper-sine-50  50-neuron chain, sinusoidal input, device mismatch on
//   paper-ramp-10  10-neuron chain, sawtooth input, circuit-level clocks
FullConfig preset(const std::string& name);
std::vector<std::string> preset_names();

// INI-style text: [section] headers, key = value lines, '#' comments.
// Unknown sections or keys, malformed values and violated invariants are all
// reported with the key name and, where known, the line number.
FullConfig parse_config_text(const std::string& text,
                             const std::string& origin);
FullConfig parse_config_file(const std::string& path);

// Canonical dump; parse(render(c)) == c and render is a fixed point of
// parse-then-render. Floats are emitted shortest-round-trip.
std::string render_config(const FullConfig& cfg);

} // namespace nadc
