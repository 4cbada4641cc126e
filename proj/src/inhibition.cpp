#include "nadc/inhibition.hpp"

#include <algorithm>
#include <stdexcept>

namespace nadc {

int pulse_width(const InhibitionPolicy& policy, int distance_k,
                int gen_ticks_per_step, Rng& rng)
{
    if (distance_k < 0)
        throw std::invalid_argument("pulse_width: distance must be >= 0");

    if (distance_k == 0)
        return gen_ticks_per_step; // self-reset, full slot

    int w = std::max(policy.min_width_ticks,
                     policy.base_width_ticks -
                         (distance_k - 1) * policy.decrement_ticks);
    if (policy.jitter_ticks > 0)
        w += rng.uniform_int(-policy.jitter_ticks, policy.jitter_ticks);
    return std::clamp(w, 0, gen_ticks_per_step);
}

std::vector<PulseEvent> build_schedule(const InhibitionPolicy& policy,
                                       int firer_id, std::int64_t step,
                                       int n_neurons, int gen_ticks_per_step,
                                       Rng& rng)
{
    if (firer_id < 0 || firer_id >= n_neurons)
        throw std::invalid_argument("build_schedule: firer out of range");

    std::vector<PulseEvent> events;
    events.push_back({firer_id, step, gen_ticks_per_step, firer_id, true});
    if (!policy.enabled)
        return events;

    int n_targets = n_neurons - 1;
    if (policy.fanout >= 0)
        n_targets = std::min(policy.fanout, n_targets);
    events.reserve(1 + n_targets);
    for (int k = 1; k <= n_targets; ++k) {
        const int target = (firer_id + k) % n_neurons;
        const int w = pulse_width(policy, k, gen_ticks_per_step, rng);
        events.push_back({target, step + k, w, firer_id, false});
    }
    return events;
}

std::vector<PulseEvent> handle_fire(bool firer_inhibited,
                                    const InhibitionPolicy& policy,
                                    int firer_id, std::int64_t step,
                                    int n_neurons, int gen_ticks_per_step,
                                    Rng& rng)
{
    if (firer_inhibited) {
        // Suppressed: the neuron already took a lateral hit this cycle, so it
        // spikes without rebroadcasting.
        return {{firer_id, step, gen_ticks_per_step, firer_id, true}};
    }
    return build_schedule(policy, firer_id, step, n_neurons,
                          gen_ticks_per_step, rng);
}

} // namespace nadc
