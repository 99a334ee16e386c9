#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "daeimp/encoding.hpp"
#include "daeimp/matrix.hpp"

namespace daeimp {

// Which masked cells a score covers: every induced-missing cell, or only
// those in the held-out partition rows.
enum class ScoreScope { AllMissing, TestMissing };

const char* to_string(ScoreScope scope);

struct ScoreReport {
    double rmse_sum = 0.0;
    std::vector<double> per_attribute_rmse; // one entry per ORIGINAL column
    std::size_t cells_scored = 0;           // encoded cells with mask set
    ScoreScope restricted_to = ScoreScope::AllMissing;
};

// Sum over original attributes of the per-attribute root-mean-squared error,
// computed in encoded (scaled) space over the cells flagged in scoring_mask.
// A categorical block counts as ONE attribute (RMSE across its encoded
// cells); attributes with no scored cells contribute 0. Throws shape_error on
// mismatched shapes, data_error when the mask selects nothing.
ScoreReport rmse_sum(const Matrix& imputed, const Matrix& truth,
                     const Matrix& scoring_mask, const EncodingMap& map,
                     ScoreScope scope = ScoreScope::AllMissing);

// Mean error ratio: mean(e_model) / mean(e_reference). Values below one mean
// the model beat the reference on average. Throws data_error on empty input
// or a non-positive reference mean.
double error_ratio(const std::vector<double>& e_model,
                   const std::vector<double>& e_reference);

struct PooledStat {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

// Arithmetic mean plus extrema of per-imputation statistics.
// Throws data_error on empty input.
PooledStat pool(const std::vector<double>& values);

// One line of a benchmark summary: the pooled imputation error of one method
// on one (dataset, mechanism, pattern, t) cell, with an optional error ratio
// against the reference method (NaN when absent).
struct SummaryRow {
    std::string dataset;
    std::string mechanism;
    std::string pattern;
    double t = 0.0;
    std::string method;
    PooledStat rmse;
    double ratio_vs_reference = std::numeric_limits<double>::quiet_NaN();
};

// Stable report order: by dataset, mechanism, pattern, t, then method.
std::vector<SummaryRow> summarize(std::vector<SummaryRow> rows);

// CSV rendering of a summary table. Absent ratios render as "?", so the text
// loads back through load_csv with the default missing tokens.
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

} // namespace daeimp
