#include "daeimp/nn.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "daeimp/kernels.hpp"

namespace daeimp {

namespace {

void apply_activation(Matrix& m, ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Tanh:
            kernels::tanh_inplace(m);
            break;
        case ActivationKind::Identity:
            break;
    }
}

// delta *= act'(z) expressed through the post-activation output.
void activation_backward(Matrix& delta, const Matrix& post, ActivationKind kind) {
    switch (kind) {
        case ActivationKind::Tanh:
            kernels::tanh_backward_inplace(delta, post);
            break;
        case ActivationKind::Identity:
            break;
    }
}

} // namespace

void init_uniform(DenseLayer& layer, Rng& rng, double r) {
    for (double& w : layer.weights.data) w = rng.uniform(-r, r);
    for (double& b : layer.bias) b = 0.0;
}

void init_uniform(DenseLayer& layer, Rng& rng) {
    const double fan_in = static_cast<double>(layer.in_dim());
    const double fan_out = static_cast<double>(layer.out_dim());
    init_uniform(layer, rng, std::sqrt(6.0 / (fan_in + fan_out)));
}

Matrix layer_forward(const DenseLayer& layer, const Matrix& input) {
    if (input.cols != layer.in_dim()) {
        throw shape_error("layer_forward: input " + input.shape_str() +
                          " does not match weights " + layer.weights.shape_str());
    }
    Matrix out(input.rows, layer.out_dim());
    kernels::matmul_nt(input, layer.weights, out);
    kernels::add_row_vector(out, layer.bias);
    apply_activation(out, layer.activation);
    return out;
}

ForwardCache network_forward(const std::vector<DenseLayer>& layers, const Matrix& input) {
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        if (layers[l].out_dim() != layers[l + 1].in_dim()) {
            throw shape_error("network_forward: layer " + std::to_string(l) + " outputs " +
                              std::to_string(layers[l].out_dim()) + " but layer " +
                              std::to_string(l + 1) + " expects " +
                              std::to_string(layers[l + 1].in_dim()));
        }
    }
    ForwardCache cache;
    cache.activations.reserve(layers.size() + 1);
    cache.activations.push_back(input);
    for (const DenseLayer& layer : layers) {
        cache.activations.push_back(layer_forward(layer, cache.activations.back()));
    }
    return cache;
}

LossResult mse_loss(const Matrix& pred, const Matrix& target, const Matrix* weight_mask) {
    require_same_shape(pred, target, "mse_loss");
    std::size_t counted = pred.data.size();
    if (weight_mask != nullptr) {
        require_same_shape(pred, *weight_mask, "mse_loss mask");
        counted = 0;
        for (double m : weight_mask->data) {
            if (m != 0.0) ++counted;
        }
        if (counted == 0) throw data_error("mse_loss: weight mask selects no entries");
    }

    LossResult res;
    res.gradient = Matrix(pred.rows, pred.cols);
    double total = 0.0;
    const double inv = 1.0 / static_cast<double>(counted);
    for (std::size_t i = 0; i < pred.data.size(); ++i) {
        if (weight_mask != nullptr && weight_mask->data[i] == 0.0) continue;
        const double diff = pred.data[i] - target.data[i];
        total += diff * diff;
        res.gradient.data[i] = 2.0 * diff * inv;
    }
    res.value = total * inv;
    return res;
}

Gradients network_backward(const std::vector<DenseLayer>& layers,
                           const ForwardCache& cache, const Matrix& loss_gradient) {
    if (cache.activations.size() != layers.size() + 1) {
        throw shape_error("network_backward: cache holds " +
                          std::to_string(cache.activations.size()) +
                          " activations for " + std::to_string(layers.size()) + " layers");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (cache.activations[l].cols != layers[l].in_dim() ||
            cache.activations[l + 1].cols != layers[l].out_dim()) {
            throw shape_error("network_backward: cache does not match layer " +
                              std::to_string(l));
        }
    }
    require_same_shape(loss_gradient, cache.activations.back(), "network_backward");

    Gradients grads;
    grads.weights.resize(layers.size());
    grads.bias.resize(layers.size());

    Matrix delta = loss_gradient;
    for (std::size_t l = layers.size(); l-- > 0;) {
        activation_backward(delta, cache.activations[l + 1], layers[l].activation);

        grads.weights[l] = Matrix(layers[l].out_dim(), layers[l].in_dim());
        kernels::matmul_tn(delta, cache.activations[l], grads.weights[l]);
        kernels::column_sums(delta, grads.bias[l]);

        if (l > 0) {
            Matrix next(delta.rows, layers[l].in_dim());
            kernels::matmul_nn(delta, layers[l].weights, next);
            delta = std::move(next);
        }
    }
    return grads;
}

OptimizerState OptimizerState::for_layers(const std::vector<DenseLayer>& layers,
                                          double momentum, double base_learning_rate,
                                          double decay) {
    OptimizerState st;
    st.momentum = momentum;
    st.base_learning_rate = base_learning_rate;
    st.decay = decay;
    st.velocity_w.reserve(layers.size());
    st.velocity_b.reserve(layers.size());
    for (const DenseLayer& layer : layers) {
        st.velocity_w.emplace_back(layer.out_dim(), layer.in_dim());
        st.velocity_b.emplace_back(layer.out_dim(), 0.0);
    }
    return st;
}

double decayed_learning_rate(double base, double decay, std::size_t epoch) {
    double lr = base;
    for (std::size_t e = 0; e < epoch; ++e) lr *= decay;
    return lr;
}

ParamSnapshot apply_lookahead(std::vector<DenseLayer>& layers, const OptimizerState& state) {
    ParamSnapshot snap;
    snap.weights.reserve(layers.size());
    snap.bias.reserve(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        snap.weights.push_back(layers[l].weights);
        snap.bias.push_back(layers[l].bias);
        if (state.momentum == 0.0) continue;
        for (std::size_t i = 0; i < layers[l].weights.data.size(); ++i) {
            layers[l].weights.data[i] += state.momentum * state.velocity_w[l].data[i];
        }
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
            layers[l].bias[i] += state.momentum * state.velocity_b[l][i];
        }
    }
    return snap;
}

void restore_params(std::vector<DenseLayer>& layers, const ParamSnapshot& snapshot) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
        layers[l].weights = snapshot.weights[l];
        layers[l].bias = snapshot.bias[l];
    }
}

void nesterov_step(std::vector<DenseLayer>& layers, const Gradients& grads,
                   OptimizerState& state, std::size_t epoch) {
    if (grads.weights.size() != layers.size() || grads.bias.size() != layers.size()) {
        throw shape_error("nesterov_step: gradient count does not match layer count");
    }
    for (std::size_t l = 0; l < layers.size(); ++l) {
        if (!grads.weights[l].all_finite()) {
            throw divergence_error("nesterov_step: non-finite weight gradient in layer " +
                                       std::to_string(l),
                                   epoch);
        }
        for (double g : grads.bias[l]) {
            if (!std::isfinite(g)) {
                throw divergence_error("nesterov_step: non-finite bias gradient in layer " +
                                           std::to_string(l),
                                       epoch);
            }
        }
    }

    const double lr = decayed_learning_rate(state.base_learning_rate, state.decay, epoch);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        Matrix& vw = state.velocity_w[l];
        for (std::size_t i = 0; i < vw.data.size(); ++i) {
            vw.data[i] = state.momentum * vw.data[i] - lr * grads.weights[l].data[i];
            layers[l].weights.data[i] += vw.data[i];
        }
        std::vector<double>& vb = state.velocity_b[l];
        for (std::size_t i = 0; i < vb.size(); ++i) {
            vb[i] = state.momentum * vb[i] - lr * grads.bias[l][i];
            layers[l].bias[i] += vb[i];
        }
    }
}

namespace {

// Forward pass and MSE evaluated entirely in extended precision. The central
// difference below subtracts two nearly equal losses, so evaluating them in
// plain double would leave the difference dominated by rounding noise for
// small-magnitude gradient coordinates.
long double loss_extended(const std::vector<DenseLayer>& layers,
                          const Matrix& input, const Matrix& target) {
    const std::size_t rows = input.rows;
    std::vector<long double> cur(input.data.begin(), input.data.end());
    std::size_t width = input.cols;
    std::vector<long double> next;
    for (const DenseLayer& layer : layers) {
        const std::size_t out_w = layer.out_dim();
        next.assign(rows * out_w, 0.0L);
        for (std::size_t r = 0; r < rows; ++r) {
            const long double* in_row = cur.data() + r * width;
            for (std::size_t o = 0; o < out_w; ++o) {
                long double acc = layer.bias[o];
                const double* w_row = layer.weights.row_ptr(o);
                for (std::size_t j = 0; j < width; ++j) {
                    acc += static_cast<long double>(w_row[j]) * in_row[j];
                }
                next[r * out_w + o] =
                    layer.activation == ActivationKind::Tanh ? tanhl(acc) : acc;
            }
        }
        cur.swap(next);
        width = out_w;
    }
    long double acc = 0.0L;
    for (std::size_t i = 0; i < cur.size(); ++i) {
        const long double d = cur[i] - static_cast<long double>(target.data[i]);
        acc += d * d;
    }
    return acc / static_cast<long double>(cur.size());
}

} // namespace

double gradient_check(std::vector<DenseLayer>& layers, const Matrix& input,
                      const Matrix& target, double eps) {
    if (eps <= 0.0) throw config_error("gradient_check: eps must be positive");

    const ForwardCache cache = network_forward(layers, input);
    const LossResult loss = mse_loss(cache.output(), target);
    const Gradients analytic = network_backward(layers, cache, loss.gradient);

    double worst = 0.0;
    const auto probe = [&](double& param, double analytic_g) {
        const double saved = param;
        param = saved + eps;
        const long double up = loss_extended(layers, input, target);
        param = saved - eps;
        const long double down = loss_extended(layers, input, target);
        param = saved;
        const double numeric = static_cast<double>(
            (up - down) / (2.0L * static_cast<long double>(eps)));
        const double denom =
            std::max({std::abs(analytic_g), std::abs(numeric), 1e-12});
        worst = std::max(worst, std::abs(analytic_g - numeric) / denom);
    };

    for (std::size_t l = 0; l < layers.size(); ++l) {
        for (std::size_t i = 0; i < layers[l].weights.data.size(); ++i) {
            probe(layers[l].weights.data[i], analytic.weights[l].data[i]);
        }
        for (std::size_t i = 0; i < layers[l].bias.size(); ++i) {
            probe(layers[l].bias[i], analytic.bias[l][i]);
        }
    }
    return worst;
}

} // namespace daeimp
