#pragma once

#include <cstdint>
#include <vector>

#include "daeimp/dae.hpp"
#include "daeimp/dataset.hpp"
#include "daeimp/encoding.hpp"

namespace daeimp {

struct MIConfig {
    std::size_t k = 5;        // number of imputations
    TrainConfig train;        // per-run seed is derived; the seed field here is ignored
    std::size_t theta = 7;    // hidden-layer growth per depth step
    std::size_t encoder_depth = 3;
    double split_ratio = 0.7;
    std::uint64_t master_seed = 0;
    std::size_t workers = 1;  // concurrent runs (results identical regardless)
};

struct MIRunInfo {
    std::uint64_t seed = 0; // weight-init seed of this run
    TrainHistory history;
};

struct MIResult {
    std::vector<Dataset> completions; // k complete datasets, all-false masks
    std::vector<MIRunInfo> runs;
    SplitIndices split;               // shared by all runs
    EncodingMap map;                  // learned from the masked input
    std::vector<double> per_imputation_scores; // filled by scoring callers
};

// Produces cfg.k completions of a dataset with missing cells. Shared setup:
// encode, fill placeholders, split rows once with the master seed. Each run i
// (1-based, seed master_seed + i) then trains a freshly initialized denoising
// autoencoder on the train partition, reconstructs the full matrix, and
// overwrites only the masked cells. Completions are merged at the typed
// level, so observed cells are bit-identical to the input across all runs;
// runs differ solely in weight initialization, corruption, and batch order.
//
// Throws data_error when the input has no missing cells, config_error for
// k = 0, and forwards training divergence tagged with the run index.
MIResult multiple_impute(const Dataset& ds, const MIConfig& cfg);

// The weight-init seed of 1-based run `i` under `master_seed`, and the
// derived stream seed its training randomness (corruption, batch order)
// uses. Exposed for manifests and reproducibility notes.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t i);
std::uint64_t train_stream_seed(std::uint64_t seed);

// Copies every observed cell of `source` over the matching cell of
// `completion` (same schema/rows), leaving imputed cells alone. Keeps
// observed values bit-exact regardless of encode/decode rounding.
void restore_observed_cells(Dataset& completion, const Dataset& source);

} // namespace daeimp
