#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "daeimp/matrix.hpp"
#include "daeimp/rng.hpp"

namespace daeimp {

enum class ActivationKind { Tanh, Identity };

// Fully-connected layer: out = act(input * weights^T + bias), inputs are rows.
struct DenseLayer {
    Matrix weights;            // out_dim x in_dim
    std::vector<double> bias;  // out_dim
    ActivationKind activation = ActivationKind::Identity;

    DenseLayer() = default;
    DenseLayer(std::size_t out_dim, std::size_t in_dim, ActivationKind act)
        : weights(out_dim, in_dim), bias(out_dim, 0.0), activation(act) {}

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
};

// Uniform init on [-r, r]; default r = sqrt(6 / (fan_in + fan_out)).
// Biases start at zero.
void init_uniform(DenseLayer& layer, Rng& rng);
void init_uniform(DenseLayer& layer, Rng& rng, double r);

Matrix layer_forward(const DenseLayer& layer, const Matrix& input);

// Post-activation outputs of every layer; activations[0] is the input.
struct ForwardCache {
    std::vector<Matrix> activations;
    const Matrix& output() const { return activations.back(); }
};

ForwardCache network_forward(const std::vector<DenseLayer>& layers, const Matrix& input);

struct LossResult {
    double value = 0.0;
    Matrix gradient;
};

// Mean squared error over all (or mask-selected) entries. Mask entries are
// 0/1; gradient at excluded entries is zero and the mean divides by the
// number of included entries.
LossResult mse_loss(const Matrix& pred, const Matrix& target,
                    const Matrix* weight_mask = nullptr);

struct Gradients {
    std::vector<Matrix> weights;             // same shapes as layer weights
    std::vector<std::vector<double>> bias;   // same lengths as layer biases
};

Gradients network_backward(const std::vector<DenseLayer>& layers,
                           const ForwardCache& cache, const Matrix& loss_gradient);

// Nesterov momentum with a per-epoch time-decayed learning rate.
// Velocity shapes mirror the parameter shapes they update.
struct OptimizerState {
    std::vector<Matrix> velocity_w;
    std::vector<std::vector<double>> velocity_b;
    double momentum = 0.9;
    double base_learning_rate = 0.01;
    double decay = 0.99;

    static OptimizerState for_layers(const std::vector<DenseLayer>& layers,
                                     double momentum = 0.9,
                                     double base_learning_rate = 0.01,
                                     double decay = 0.99);
};

// Learning rate at the given epoch: base * decay^epoch, computed by repeated
// multiplication so consecutive epochs differ by exactly one rounded product.
double decayed_learning_rate(double base, double decay, std::size_t epoch);

// Applies v <- mu*v - lr*g; theta <- theta + v. The gradients are expected to
// be evaluated at the lookahead point theta + mu*v (see apply_lookahead).
// Throws divergence_error on non-finite gradients.
void nesterov_step(std::vector<DenseLayer>& layers, const Gradients& grads,
                   OptimizerState& state, std::size_t epoch);

// Adds mu*v to every parameter so gradients can be evaluated at the
// lookahead point. Returns the pre-lookahead parameters for exact restore.
struct ParamSnapshot {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> bias;
};
ParamSnapshot apply_lookahead(std::vector<DenseLayer>& layers, const OptimizerState& state);
void restore_params(std::vector<DenseLayer>& layers, const ParamSnapshot& snapshot);

// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-12)
// where numeric is the central finite difference of the MSE loss with step eps.
double gradient_check(std::vector<DenseLayer>& layers, const Matrix& input,
                      const Matrix& target, double eps);

} // namespace daeimp
