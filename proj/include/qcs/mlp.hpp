#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcs/rng.hpp"

namespace qcs {

struct DenseLayer {
    int in = 0;
    int out = 0;
    std::vector<double> weights;  // row-major, out x in
    std::vector<double> bias;     // out
};

// Small fully-connected network: tanh on hidden layers, linear output.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::span<const int> layer_sizes);

    // Xavier-style uniform init; the output layer is additionally scaled so a
    // fresh policy starts close to zero mean.
    void init_uniform(Rng& rng, double output_scale = 1.0);

    int input_dim() const { return layers.empty() ? 0 : layers.front().in; }
    int output_dim() const { return layers.empty() ? 0 : layers.back().out; }
    std::size_t param_count() const;

    std::vector<double> forward(std::span<const double> input) const;

    // Post-activation values per layer, index 0 being the input itself.
    struct Trace {
        std::vector<std::vector<double>> activations;
    };
    std::vector<double> forward(std::span<const double> input, Trace& trace) const;

    // Accumulates dLoss/dParams into `grad` (a zeros_like copy of this net)
    // given the gradient at the network output.
    void backward(const Trace& trace, std::span<const double> output_grad, Mlp& grad) const;

    static Mlp zeros_like(const Mlp& shape);

    std::vector<DenseLayer> layers;
};

// Adam with bias correction; beta parameters fixed at 0.9 / 0.999, eps 1e-8.
class AdamOptimizer {
public:
    AdamOptimizer(std::size_t param_count, double learning_rate);

    void step(std::span<double> params, std::span<const double> grads);

private:
    double lr_;
    long long t_ = 0;
    std::vector<double> m_;
    std::vector<double> v_;
};

}  // namespace qcs
