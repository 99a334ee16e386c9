#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "daeimp/dataset.hpp"

namespace daeimp {

enum class TaskKind { Classification, Regression };

const char* to_string(TaskKind task);

struct EvalConfig {
    std::string target_column;
    // Inferred from the target's schema kind when unset: categorical and
    // ordinal targets classify, continuous targets regress.
    std::optional<TaskKind> task;
    std::size_t folds = 5;
    std::size_t repeats = 5;
    std::size_t knn_k = 5; // neighbors consulted per prediction
    std::uint64_t seed = 0;
};

struct CvReport {
    TaskKind task = TaskKind::Classification;
    double mean_score = 0.0;         // accuracy (classification) or RMSE (regression)
    std::vector<double> fold_scores; // repeats * folds entries, repeat-major
    bool degenerate_target = false;  // constant target under classification
};

// Repeated k-fold cross-validation of a k-nearest-neighbor predictor on a
// complete dataset. Folds are seed-deterministic random partitions (every row
// predicted exactly once per repeat). Distances are Euclidean in encoded
// space over all non-target columns; neighbor ties break toward the lower row
// index. Classification predicts the majority label (vote ties toward the
// lowest category index) and scores accuracy; regression predicts the
// neighbor mean and scores RMSE in original units. The returned mean averages
// the per-fold scores.
//
// Throws data_error for missing cells or folds exceeding the row count,
// config_error for an unknown target, folds < 2, or a task/kind mismatch.
CvReport cross_validate(const Dataset& completed, const EvalConfig& cfg);

struct MethodCompletions {
    std::string method;
    std::vector<Dataset> completions;
};

struct MethodScore {
    std::string method;
    TaskKind task = TaskKind::Classification;
    double mean_score = 0.0; // mean over completions of cross_validate means
    std::vector<double> per_completion;
};

// Cross-validates every completion of every method under one config. Rows
// keep the given method order; callers may include the original complete
// dataset as a single-completion "truth" method for an upper reference.
std::vector<MethodScore> compare_methods(const std::vector<MethodCompletions>& methods,
                                         const EvalConfig& cfg);

} // namespace daeimp
