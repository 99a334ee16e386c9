#pragma once

#include <cstdint>
#include <vector>

#include "daeimp/dataset.hpp"
#include "daeimp/mi.hpp"

namespace daeimp {

// Deterministic single imputation: column mean for continuous/ordinal cells,
// modal label for categorical cells (the placeholder rule applied as a
// standalone imputer). Observed cells are untouched.
Dataset mean_mode_impute(const Dataset& ds);

struct ChainedConfig {
    std::size_t iterations = 10; // full column sweeps per run
    std::size_t donors = 5;      // donor pool size for matching
    std::size_t k = 5;           // number of imputations
    std::uint64_t seed = 0;
    bool random_sweep_order = false; // default: schema order
    std::size_t workers = 1;
};

// Simplified chained-equations imputer with predictive mean matching,
// reported as "cepmm". Per run: missing cells start at mean/mode; each sweep
// visits every column with missing cells and fits a least-squares linear
// model of that column (in encoded space, one-hot outputs for categoricals)
// on all other encoded columns over the rows where the column is observed. A
// singular system falls back to a ridge-regularized solve (lambda 1e-6).
// Each missing cell then receives the ACTUAL observed value of one of the
// `donors` observed rows with the closest prediction (ties by distance, then
// by lower row index), sampled uniformly.
//
// This is a deliberately small stand-in for full chained-equations stacks:
// linear conditionals only, no posterior draws of coefficients.
//
// Throws data_error for fewer than 2 columns or when any column has fewer
// than max(donors + 1, 2) observed values; config_error for zero
// iterations/donors/k.
MIResult chained_pmm_impute(const Dataset& ds, const ChainedConfig& cfg);

} // namespace daeimp
