#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nadc {

// Behavioral constants of one integrate-and-fire cell. Membrane voltage is
// expressed in threshold units: the comparator trips at exactly 1.0 and all
// capacitance/voltage constants collapse into charge_gain.
struct NeuronParams {
    double charge_gain = 1.0;  // threshold units per coulomb
    double i_exc_max = std::numeric_limits<double>::infinity();  // A, charge-path clamp
    double i_inh = 0.0;        // A, discharge current while an inhibition pulse is high
    double leak_tau = std::numeric_limits<double>::infinity();   // s, inf = no leak
    double v_max = 2.0;        // threshold units, supply-rail ceiling
    double tick_seconds = 1.0; // duration of one inhibition-generator tick
};

struct NeuronState {
    double v = 0.0;     // membrane, threshold units
    double g_exc = 1.0; // fixed mismatch factor, charge path
    double g_inh = 1.0; // fixed mismatch factor, discharge path
    bool inhibited = false; // has received a lateral pulse since its own last spike
};

constexpr double kThreshold = 1.0;

inline double leak_decay(const NeuronParams& p, double dt)
{
    return std::isinf(p.leak_tau) ? 1.0 : std::exp(-dt / p.leak_tau);
}

// Loop body shared by the array kernels; decay is hoisted out because it is
// the same for every neuron in a step.
inline void integrate_in_place(NeuronState& s, const NeuronParams& p,
                               double i_in, double dt, double decay) noexcept
{
    const double i_eff = std::min(s.g_exc * i_in, p.i_exc_max);
    s.v = std::min(p.v_max, s.v * decay + p.charge_gain * i_eff * dt);
}

// Charge the membrane from the shared input current over dt. The effective
// charging current is the mismatched input clamped to i_exc_max; the result
// saturates at v_max.
inline NeuronState integrate(NeuronState s, const NeuronParams& p, double i_in,
                             double dt)
{
    if (i_in < 0.0)
        throw std::invalid_argument("integrate: input current must be >= 0");
    if (dt <= 0.0)
        throw std::invalid_argument("integrate: dt must be > 0");

    integrate_in_place(s, p, i_in, dt, leak_decay(p, dt));
    return s;
}

// Discharge by one inhibition pulse of the given width. A self-reset pulse is
// the full-slot pulse the generator sends back to the firing neuron; it
// empties the membrane exactly. Lateral pulses remove charge proportional to
// their width and clamp at ground.
inline NeuronState apply_pulse(NeuronState s, const NeuronParams& p,
                               int width_ticks, bool is_self_reset)
{
    if (width_ticks < 0)
        throw std::invalid_argument("apply_pulse: width_ticks must be >= 0");

    if (is_self_reset) {
        s.v = 0.0;
        return s;
    }
    const double drop =
        p.charge_gain * s.g_inh * p.i_inh * width_ticks * p.tick_seconds;
    s.v = std::max(0.0, s.v - drop);
    return s;
}

inline bool at_threshold(const NeuronState& s) { return s.v >= kThreshold; }

} // namespace nadc
