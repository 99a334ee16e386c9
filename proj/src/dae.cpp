#include "daeimp/dae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace daeimp {

std::vector<std::size_t> DAEArchitecture::widths() const {
    std::vector<std::size_t> w;
    w.reserve(2 * encoder_depth + 1);
    for (std::size_t k = 0; k <= encoder_depth; ++k) w.push_back(input_dim + k * theta);
    for (std::size_t k = encoder_depth; k-- > 0;) w.push_back(input_dim + k * theta);
    return w;
}

DAENetwork build_dae(std::size_t n, std::size_t theta, std::uint64_t seed,
                     std::size_t encoder_depth) {
    if (n == 0) throw config_error("build_dae: input dimension must be at least 1");
    if (encoder_depth == 0) throw config_error("build_dae: encoder depth must be at least 1");

    DAENetwork net;
    net.arch = DAEArchitecture{n, theta, encoder_depth};
    const std::vector<std::size_t> w = net.arch.widths();

    Rng rng(seed);
    net.layers.reserve(w.size() - 1);
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const bool last = (l + 2 == w.size());
        DenseLayer layer(w[l + 1], w[l],
                         last ? ActivationKind::Identity : ActivationKind::Tanh);
        init_uniform(layer, rng);
        net.layers.push_back(std::move(layer));
    }
    return net;
}

Matrix corrupt(const Matrix& input, double dropout, Rng& rng) {
    if (dropout < 0.0 || dropout >= 1.0) {
        throw config_error("corrupt: dropout must lie in [0, 1)");
    }
    Matrix out = input;
    if (dropout == 0.0) return out;
    for (double& v : out.data) {
        if (rng.uniform() < dropout) v = 0.0;
    }
    return out;
}

namespace {

Matrix gather_rows(const Matrix& data, const std::vector<std::size_t>& order,
                   std::size_t begin, std::size_t end) {
    Matrix out(end - begin, data.cols);
    for (std::size_t i = begin; i < end; ++i) {
        const double* src = data.row_ptr(order[i]);
        std::copy(src, src + data.cols, out.row_ptr(i - begin));
    }
    return out;
}

} // namespace

TrainHistory train_dae(DAENetwork& net, const Matrix& data, const TrainConfig& cfg) {
    if (data.cols != net.input_dim()) {
        throw shape_error("train_dae: data " + data.shape_str() + " vs network input " +
                          std::to_string(net.input_dim()));
    }
    if (data.rows == 0) throw data_error("train_dae: empty training data");
    if (cfg.sma_window < 2) throw config_error("train_dae: sma_window must be >= 2");
    if (cfg.target_mse <= 0.0) throw config_error("train_dae: target_mse must be > 0");

    const std::size_t batch =
        cfg.batch_size > 0 ? std::min(cfg.batch_size, data.rows)
                           : std::min<std::size_t>(32, data.rows);

    OptimizerState state = OptimizerState::for_layers(
        net.layers, cfg.momentum, cfg.base_learning_rate, cfg.lr_decay);

    Rng rng(cfg.seed);
    std::vector<std::size_t> order(data.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainHistory history;
    history.stop_reason = StopReason::EpochBudget;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);

        double sq_sum = 0.0;
        std::size_t cells = 0;
        for (std::size_t begin = 0; begin < data.rows; begin += batch) {
            const std::size_t end = std::min(begin + batch, data.rows);
            const Matrix clean = gather_rows(data, order, begin, end);
            const Matrix noisy = corrupt(clean, cfg.input_dropout, rng);

            const ParamSnapshot snap = apply_lookahead(net.layers, state);
            const ForwardCache cache = network_forward(net.layers, noisy);
            const LossResult loss = mse_loss(cache.output(), clean);
            const Gradients grads = network_backward(net.layers, cache, loss.gradient);
            restore_params(net.layers, snap);

            if (!std::isfinite(loss.value)) {
                throw divergence_error(
                    "train_dae: non-finite loss at epoch " + std::to_string(epoch), epoch);
            }

            // nesterov_step recomputes the decayed rate; state carries the base.
            nesterov_step(net.layers, grads, state, epoch);

            sq_sum += loss.value * static_cast<double>(clean.data.size());
            cells += clean.data.size();
        }

        const double epoch_loss = sq_sum / static_cast<double>(cells);
        if (!std::isfinite(epoch_loss)) {
            throw divergence_error(
                "train_dae: non-finite epoch loss at epoch " + std::to_string(epoch), epoch);
        }
        history.epoch_loss.push_back(epoch_loss);
        history.epochs_run = epoch + 1;

        if (epoch_loss <= cfg.target_mse) {
            history.stop_reason = StopReason::TargetMSE;
            break;
        }
        // SMA(window) of per-epoch improvement <= 0 collapses to
        // loss[e] >= loss[e - window]; only checkable once window epochs of
        // improvements exist.
        if (history.epoch_loss.size() > cfg.sma_window) {
            const double before =
                history.epoch_loss[history.epoch_loss.size() - 1 - cfg.sma_window];
            if (epoch_loss >= before) {
                history.stop_reason = StopReason::SMAStall;
                break;
            }
        }
    }
    return history;
}

Matrix reconstruct(const DAENetwork& net, const Matrix& data) {
    if (data.cols != net.input_dim()) {
        throw shape_error("reconstruct: data " + data.shape_str() + " vs network input " +
                          std::to_string(net.input_dim()));
    }
    ForwardCache cache = network_forward(net.layers, data);
    Matrix out = cache.activations.back();
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

const char* to_string(StopReason reason) {
    switch (reason) {
        case StopReason::EpochBudget: return "epoch_budget";
        case StopReason::TargetMSE: return "target_mse";
        case StopReason::SMAStall: return "sma_stall";
    }
    return "unknown";
}

} // namespace daeimp
