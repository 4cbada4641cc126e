#pragma once

#include <cstdint>
#include <vector>

#include "nadc/rng.hpp"

namespace nadc {

constexpr int kFanoutAll = -1;

// Pulse-width schedule the generator broadcasts when an un-inhibited neuron
// fires: a full-slot reset for the firer, then a width ramp for the neurons
// that follow it in scan order. All parameters are runtime configuration,
// mirroring the reconfigurable controller they stand in for.
struct InhibitionPolicy {
    bool enabled = true;
    int base_width_ticks = 8; // width at scan-order distance 1
    int decrement_ticks = 1;  // systematic per-position reduction
    int min_width_ticks = 1;  // ramp floor
    int jitter_ticks = 1;     // uniform in [-j, +j], drawn per pulse
    int fanout = kFanoutAll;  // lateral targets after the firer; <0 = all
};

struct PulseEvent {
    int target_id = 0;
    std::int64_t delivery_step = 0; // absolute scan step
    int width_ticks = 0;
    int origin_id = 0;
    bool is_self_reset = false;
};

// Width of the pulse for the neuron at scan-order distance k from the firer.
// Distance 0 is the firer itself and gets the full-slot reset pulse; the
// lateral ramp starts at base width and decrements with distance down to the
// floor, plus per-pulse jitter. The result never exceeds one scan step: the
// target owns the inhibition channel only for its own slot.
int pulse_width(const InhibitionPolicy& policy, int distance_k,
                int gen_ticks_per_step, Rng& rng);

// Full schedule for one un-inhibited fire: the self-reset at `step` followed
// by one lateral pulse per target, delivered on strictly consecutive steps in
// scan order (wrapping modulo the array). With the policy disabled only the
// self-reset remains.
std::vector<PulseEvent> build_schedule(const InhibitionPolicy& policy,
                                       int firer_id, std::int64_t step,
                                       int n_neurons, int gen_ticks_per_step,
                                       Rng& rng);

// The decision the generator takes on a spike flag: broadcast if the firer
// has not been inhibited since its last spike, otherwise reset it quietly.
// The caller clears the firer's inhibited flag after handling either way.
std::vector<PulseEvent> handle_fire(bool firer_inhibited,
                                    const InhibitionPolicy& policy,
                                    int firer_id, std::int64_t step,
                                    int n_neurons, int gen_ticks_per_step,
                                    Rng& rng);

} // namespace nadc
