#include "qcs/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace qcs {

Mlp::Mlp(std::span<const int> layer_sizes) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("Mlp: need at least input and output sizes");
    }
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i) {
        if (layer_sizes[i] < 1 || layer_sizes[i + 1] < 1) {
            throw std::invalid_argument("Mlp: layer sizes must be positive");
        }
        DenseLayer layer;
        layer.in = layer_sizes[i];
        layer.out = layer_sizes[i + 1];
        layer.weights.assign(static_cast<std::size_t>(layer.in) * layer.out, 0.0);
        layer.bias.assign(static_cast<std::size_t>(layer.out), 0.0);
        layers.push_back(std::move(layer));
    }
}

void Mlp::init_uniform(Rng& rng, double output_scale) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        DenseLayer& layer = layers[l];
        const double limit = std::sqrt(6.0 / (layer.in + layer.out));
        const double scale = (l + 1 == layers.size()) ? output_scale : 1.0;
        for (double& w : layer.weights) {
            w = scale * limit * (2.0 * rng.uniform_real() - 1.0);
        }
        for (double& b : layer.bias) b = 0.0;
    }
}

std::size_t Mlp::param_count() const {
    std::size_t n = 0;
    for (const DenseLayer& layer : layers) n += layer.weights.size() + layer.bias.size();
    return n;
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
    Trace trace;
    return forward(input, trace);
}

std::vector<double> Mlp::forward(std::span<const double> input, Trace& trace) const {
    if (static_cast<int>(input.size()) != input_dim()) {
        throw std::invalid_argument("Mlp::forward: input has dimension " +
                                    std::to_string(input.size()) + ", expected " +
                                    std::to_string(input_dim()));
    }
    trace.activations.clear();
    trace.activations.emplace_back(input.begin(), input.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const DenseLayer& layer = layers[l];
        const std::vector<double>& prev = trace.activations.back();
        std::vector<double> next(static_cast<std::size_t>(layer.out));
        for (int r = 0; r < layer.out; ++r) {
            double acc = layer.bias[static_cast<std::size_t>(r)];
            const double* row = layer.weights.data() + static_cast<std::size_t>(r) * layer.in;
            for (int c = 0; c < layer.in; ++c) {
                acc += row[c] * prev[static_cast<std::size_t>(c)];
            }
            next[static_cast<std::size_t>(r)] = acc;
        }
        if (l + 1 < layers.size()) {
            for (double& v : next) v = std::tanh(v);
        }
        trace.activations.push_back(std::move(next));
    }
    return trace.activations.back();
}

void Mlp::backward(const Trace& trace, std::span<const double> output_grad, Mlp& grad) const {
    if (trace.activations.size() != layers.size() + 1) {
        throw std::invalid_argument("Mlp::backward: trace does not match network depth");
    }
    std::vector<double> delta(output_grad.begin(), output_grad.end());
    for (std::size_t l = layers.size(); l-- > 0;) {
        const DenseLayer& layer = layers[l];
        DenseLayer& g = grad.layers[l];
        const std::vector<double>& prev = trace.activations[l];
        for (int r = 0; r < layer.out; ++r) {
            const double d = delta[static_cast<std::size_t>(r)];
            g.bias[static_cast<std::size_t>(r)] += d;
            double* grow = g.weights.data() + static_cast<std::size_t>(r) * layer.in;
            for (int c = 0; c < layer.in; ++c) {
                grow[c] += d * prev[static_cast<std::size_t>(c)];
            }
        }
        if (l == 0) break;
        std::vector<double> prev_delta(static_cast<std::size_t>(layer.in), 0.0);
        for (int r = 0; r < layer.out; ++r) {
            const double d = delta[static_cast<std::size_t>(r)];
            const double* row = layer.weights.data() + static_cast<std::size_t>(r) * layer.in;
            for (int c = 0; c < layer.in; ++c) {
                prev_delta[static_cast<std::size_t>(c)] += d * row[c];
            }
        }
        // prev is the post-tanh activation of layer l-1
        for (int c = 0; c < layer.in; ++c) {
            const double a = prev[static_cast<std::size_t>(c)];
            prev_delta[static_cast<std::size_t>(c)] *= (1.0 - a * a);
        }
        delta = std::move(prev_delta);
    }
}

Mlp Mlp::zeros_like(const Mlp& shape) {
    Mlp out;
    for (const DenseLayer& layer : shape.layers) {
        DenseLayer g;
        g.in = layer.in;
        g.out = layer.out;
        g.weights.assign(layer.weights.size(), 0.0);
        g.bias.assign(layer.bias.size(), 0.0);
        out.layers.push_back(std::move(g));
    }
    return out;
}

AdamOptimizer::AdamOptimizer(std::size_t param_count, double learning_rate)
    : lr_(learning_rate), m_(param_count, 0.0), v_(param_count, 0.0) {}

void AdamOptimizer::step(std::span<double> params, std::span<const double> grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("AdamOptimizer::step: size mismatch");
    }
    constexpr double beta1 = 0.9;
    constexpr double beta2 = 0.999;
    constexpr double eps = 1e-8;
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = beta1 * m_[i] + (1.0 - beta1) * grads[i];
        v_[i] = beta2 * v_[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps);
    }
}

}  // namespace qcs
