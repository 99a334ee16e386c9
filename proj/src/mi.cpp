#include "daeimp/mi.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

namespace daeimp {

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t i) {
    return master_seed + static_cast<std::uint64_t>(i);
}

std::uint64_t train_stream_seed(std::uint64_t seed) {
    // Decorrelates the training stream (corruption, batch order) from the
    // weight-init stream of the same run.
    return seed ^ 0x9E3779B97F4A7C15ULL;
}

void restore_observed_cells(Dataset& completion, const Dataset& source) {
    if (completion.cols() != source.cols() || completion.rows() != source.rows()) {
        throw shape_error("restore_observed_cells: dataset shapes differ");
    }
    for (std::size_t c = 0; c < source.cols(); ++c) {
        for (std::size_t r = 0; r < source.rows(); ++r) {
            if (!source.is_missing(r, c)) {
                completion.columns[c][r] = source.columns[c][r];
                completion.missing[c][r] = 0;
            }
        }
    }
}

MIResult multiple_impute(const Dataset& ds, const MIConfig& cfg) {
    if (cfg.k == 0) throw config_error("multiple_impute: k must be at least 1");
    if (ds.missing_count() == 0) {
        throw data_error("multiple_impute: input has no missing cells");
    }

    const EncodedMatrix enc = encode(ds);
    const EncodedMatrix filled = placeholder_fill(enc);
    const SplitIndices idx = split_indices(ds.rows(), cfg.split_ratio, cfg.master_seed);

    Matrix train_values(idx.train_rows.size(), filled.values.cols);
    for (std::size_t i = 0; i < idx.train_rows.size(); ++i) {
        const double* src = filled.values.row_ptr(idx.train_rows[i]);
        std::copy(src, src + filled.values.cols, train_values.row_ptr(i));
    }

    MIResult result;
    result.split = idx;
    result.map = filled.map;
    result.completions.resize(cfg.k);
    result.runs.resize(cfg.k);

    std::vector<std::exception_ptr> failures(cfg.k);

    auto run_one = [&](std::size_t run) {
        const std::uint64_t seed = run_seed(cfg.master_seed, run + 1);
        try {
            DAENetwork net = build_dae(filled.values.cols, cfg.theta, seed,
                                       cfg.encoder_depth);
            TrainConfig train_cfg = cfg.train;
            train_cfg.seed = train_stream_seed(seed);

            TrainHistory history;
            try {
                history = train_dae(net, train_values, train_cfg);
            } catch (const divergence_error& e) {
                throw divergence_error("imputation run " + std::to_string(run + 1) +
                                           ": " + e.what(),
                                       e.epoch());
            }

            const Matrix recon = reconstruct(net, filled.values);
            Matrix merged = filled.values;
            for (std::size_t p = 0; p < merged.data.size(); ++p) {
                if (filled.mask.data[p] != 0.0) merged.data[p] = recon.data[p];
            }

            Dataset completion = decode(merged, filled.map);
            restore_observed_cells(completion, ds);

            result.runs[run] = MIRunInfo{seed, std::move(history)};
            result.completions[run] = std::move(completion);
        } catch (...) {
            failures[run] = std::current_exception();
        }
    };

    const std::size_t workers = std::min(std::max<std::size_t>(cfg.workers, 1), cfg.k);
    if (workers <= 1) {
        for (std::size_t run = 0; run < cfg.k; ++run) run_one(run);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&, w] {
                for (std::size_t run = w; run < cfg.k; run += workers) run_one(run);
            });
        }
        for (std::thread& t : threads) t.join();
    }

    for (std::size_t run = 0; run < cfg.k; ++run) {
        if (failures[run]) std::rethrow_exception(failures[run]);
    }
    return result;
}

} // namespace daeimp
