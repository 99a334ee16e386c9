#pragma once

#include <cstdint>
#include <vector>

#include "daeimp/nn.hpp"

namespace daeimp {

// Widths ramp up by theta per encoder layer and mirror back down:
// [n, n+t, n+2t, n+3t, n+2t, n+t, n] for encoder_depth 3.
struct DAEArchitecture {
    std::size_t input_dim = 0;
    std::size_t theta = 7;
    std::size_t encoder_depth = 3;

    std::vector<std::size_t> widths() const;
};

struct DAENetwork {
    DAEArchitecture arch;
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const { return arch.input_dim; }
};

// Tanh hidden layers, linear output layer, uniform weight init.
DAENetwork build_dae(std::size_t n, std::size_t theta, std::uint64_t seed,
                     std::size_t encoder_depth = 3);

// Each entry is independently zeroed with probability dropout; draws one
// uniform per entry in row-major order.
Matrix corrupt(const Matrix& input, double dropout, Rng& rng);

enum class StopReason { EpochBudget, TargetMSE, SMAStall };

struct TrainConfig {
    std::size_t epochs = 500;
    double input_dropout = 0.5;
    double target_mse = 1e-6;
    std::size_t sma_window = 5;
    std::size_t batch_size = 0;  // 0 = min(32, rows)
    double momentum = 0.9;
    double base_learning_rate = 0.01;
    double lr_decay = 0.99;
    std::uint64_t seed = 0;
};

struct TrainHistory {
    std::vector<double> epoch_loss;
    StopReason stop_reason = StopReason::EpochBudget;
    std::size_t epochs_run = 0;
};

// One epoch: shuffle rows, corrupt a fresh copy of each batch, forward,
// MSE against the clean batch, backward at the momentum lookahead point,
// Nesterov step. Stops at the epoch budget, when the epoch loss reaches
// target_mse, or when loss has not improved over the trailing sma_window
// epochs (SMA of per-epoch improvement <= 0).
TrainHistory train_dae(DAENetwork& net, const Matrix& data, const TrainConfig& cfg);

// Plain forward pass, output clipped to [0, 1]. No corruption.
Matrix reconstruct(const DAENetwork& net, const Matrix& data);

const char* to_string(StopReason reason);

} // namespace daeimp
