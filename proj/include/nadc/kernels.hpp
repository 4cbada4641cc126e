#pragma once

#include <span>

#include "nadc/neuron.hpp"

namespace nadc {

enum class ExecMode {
    Serial,   // reference implementation
    Parallel, // OpenMP
    Auto,     // parallel only when the array is large enough to amortize
};

// Membrane update for the whole array over one scan step. Every neuron sees
// the same input current; updates are independent per neuron, so the parallel
// variant is bit-identical to the serial reference.
void integrate_all_serial(std::span<NeuronState> neurons,
                          const NeuronParams& params, double i_in, double dt);
void integrate_all_omp(std::span<NeuronState> neurons,
                       const NeuronParams& params, double i_in, double dt);
void integrate_all(std::span<NeuronState> neurons, const NeuronParams& params,
                   double i_in, double dt, ExecMode mode);

// Below this size the per-step fork/join overhead outweighs the work.
constexpr int kParallelMinNeurons = 4096;

} // namespace nadc
