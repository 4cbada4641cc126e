#include "nadc/kernels.hpp"

#include <cstddef>
#include <stdexcept>

namespace nadc {

namespace {

void check_args(double i_in, double dt)
{
    if (i_in < 0.0)
        throw std::invalid_argument("integrate_all: input current must be >= 0");
    if (dt <= 0.0)
        throw std::invalid_argument("integrate_all: dt must be > 0");
}

} // namespace

void integrate_all_serial(std::span<NeuronState> neurons,
                          const NeuronParams& params, double i_in, double dt)
{
    check_args(i_in, dt);
    const double decay = leak_decay(params, dt);
    for (auto& s : neurons)
        integrate_in_place(s, params, i_in, dt, decay);
}

void integrate_all_omp(std::span<NeuronState> neurons,
                       const NeuronParams& params, double i_in, double dt)
{
    check_args(i_in, dt);
    const double decay = leak_decay(params, dt);
    const auto n = static_cast<std::ptrdiff_t>(neurons.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        integrate_in_place(neurons[i], params, i_in, dt, decay);
}

void integrate_all(std::span<NeuronState> neurons, const NeuronParams& params,
                   double i_in, double dt, ExecMode mode)
{
    switch (mode) {
    case ExecMode::Serial:
        integrate_all_serial(neurons, params, i_in, dt);
        return;
    case ExecMode::Parallel:
        integrate_all_omp(neurons, params, i_in, dt);
        return;
    case ExecMode::Auto:
        if (neurons.size() >= static_cast<std::size_t>(kParallelMinNeurons))
            integrate_all_omp(neurons, params, i_in, dt);
        else
            integrate_all_serial(neurons, params, i_in, dt);
        return;
    }
}

} // namespace nadc
