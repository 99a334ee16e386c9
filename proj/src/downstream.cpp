#include "daeimp/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "daeimp/encoding.hpp"
#include "daeimp/rng.hpp"

namespace daeimp {

const char* to_string(TaskKind task) {
    return task == TaskKind::Classification ? "classification" : "regression";
}

namespace {

std::size_t find_target(const Dataset& ds, const std::string& name) {
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        if (ds.schema[c].name == name) return c;
    }
    throw config_error("target column '" + name + "' not found in the schema");
}

TaskKind resolve_task(const ColumnSchema& target, const EvalConfig& cfg) {
    const TaskKind inferred = target.kind == ColumnKind::Continuous
                                  ? TaskKind::Regression
                                  : TaskKind::Classification;
    const TaskKind task = cfg.task.value_or(inferred);
    if (task == TaskKind::Classification && target.kind == ColumnKind::Continuous) {
        throw config_error("classification needs a categorical or ordinal target; '" +
                           target.name + "' is continuous");
    }
    if (task == TaskKind::Regression && target.kind == ColumnKind::Categorical) {
        throw config_error("regression needs a numeric or ordinal target; '" +
                           target.name + "' is categorical");
    }
    return task;
}

} // namespace

CvReport cross_validate(const Dataset& completed, const EvalConfig& cfg) {
    if (cfg.folds < 2) throw config_error("cross_validate: folds must be at least 2");
    if (cfg.repeats < 1) throw config_error("cross_validate: repeats must be at least 1");
    if (cfg.knn_k < 1) throw config_error("cross_validate: neighbor count must be >= 1");
    if (completed.missing_count() != 0) {
        throw data_error("cross_validate: dataset still has missing cells");
    }
    const std::size_t n = completed.rows();
    if (n < cfg.folds) {
        throw data_error("cross_validate: " + std::to_string(cfg.folds) +
                         " folds need at least that many rows, have " +
                         std::to_string(n));
    }

    const std::size_t target = find_target(completed, cfg.target_column);
    const ColumnSchema& target_schema = completed.schema[target];

    CvReport report;
    report.task = resolve_task(target_schema, cfg);

    // Feature space: every encoded column outside the target's block.
    const EncodedMatrix enc = encode(completed);
    const ColumnSpan tspan = enc.map.spans[target];
    std::vector<std::size_t> feature_cols;
    for (std::size_t e = 0; e < enc.map.encoded_cols; ++e) {
        if (e < tspan.begin || e >= tspan.begin + tspan.width) {
            feature_cols.push_back(e);
        }
    }

    // Targets: labels (category indices) for classification, original-unit
    // values for regression (ordinal targets regress on their rank).
    const std::vector<double>& y = completed.columns[target];
    if (report.task == TaskKind::Classification) {
        const std::set<double> distinct(y.begin(), y.end());
        report.degenerate_target = distinct.size() < 2;
    }
    const std::size_t n_labels =
        report.task == TaskKind::Classification ? target_schema.categories.size() : 0;

    Rng rng(cfg.seed);
    std::vector<std::size_t> perm(n);
    std::vector<std::pair<double, std::size_t>> ranked;
    std::vector<std::size_t> votes;

    for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        rng.shuffle(perm);

        // Contiguous chunks of the permutation; the first n % folds chunks
        // take one extra row, so every row is held out exactly once.
        std::size_t at = 0;
        for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
            const std::size_t size = n / cfg.folds + (fold < n % cfg.folds ? 1 : 0);
            const std::size_t begin = at;
            at += size;

            std::vector<std::uint8_t> held(n, 0);
            for (std::size_t i = begin; i < begin + size; ++i) held[perm[i]] = 1;
            std::vector<std::size_t> train_rows;
            train_rows.reserve(n - size);
            for (std::size_t r = 0; r < n; ++r) {
                if (!held[r]) train_rows.push_back(r);
            }
            const std::size_t k_eff = std::min(cfg.knn_k, train_rows.size());

            double fold_accum = 0.0; // correct count or squared-error sum
            for (std::size_t i = begin; i < begin + size; ++i) {
                const std::size_t row = perm[i];
                ranked.resize(train_rows.size());
                for (std::size_t t = 0; t < train_rows.size(); ++t) {
                    double d = 0.0;
                    for (std::size_t f : feature_cols) {
                        const double diff = enc.values(row, f) - enc.values(train_rows[t], f);
                        d += diff * diff;
                    }
                    ranked[t] = {d, train_rows[t]};
                }
                std::partial_sort(ranked.begin(),
                                  ranked.begin() + static_cast<std::ptrdiff_t>(k_eff),
                                  ranked.end());

                if (report.task == TaskKind::Classification) {
                    votes.assign(n_labels, 0);
                    for (std::size_t t = 0; t < k_eff; ++t) {
                        ++votes[static_cast<std::size_t>(y[ranked[t].second])];
                    }
                    const std::size_t predicted = static_cast<std::size_t>(
                        std::max_element(votes.begin(), votes.end()) - votes.begin());
                    fold_accum += predicted == static_cast<std::size_t>(y[row]);
                } else {
                    double mean = 0.0;
                    for (std::size_t t = 0; t < k_eff; ++t) mean += y[ranked[t].second];
                    mean /= static_cast<double>(k_eff);
                    const double diff = mean - y[row];
                    fold_accum += diff * diff;
                }
            }

            const double denom = static_cast<double>(size);
            report.fold_scores.push_back(report.task == TaskKind::Classification
                                             ? fold_accum / denom
                                             : std::sqrt(fold_accum / denom));
        }
    }

    for (double s : report.fold_scores) report.mean_score += s;
    report.mean_score /= static_cast<double>(report.fold_scores.size());
    return report;
}

std::vector<MethodScore> compare_methods(const std::vector<MethodCompletions>& methods,
                                         const EvalConfig& cfg) {
    if (methods.empty()) {
        throw data_error("compare_methods: no methods to evaluate");
    }
    std::vector<MethodScore> scores;
    scores.reserve(methods.size());
    for (const MethodCompletions& method : methods) {
        if (method.completions.empty()) {
            throw data_error("compare_methods: method '" + method.method +
                             "' contributes no completions");
        }
        MethodScore score;
        score.method = method.method;
        for (const Dataset& completion : method.completions) {
            const CvReport report = cross_validate(completion, cfg);
            score.task = report.task;
            score.per_completion.push_back(report.mean_score);
            score.mean_score += report.mean_score;
        }
        score.mean_score /= static_cast<double>(score.per_completion.size());
        scores.push_back(std::move(score));
    }
    return scores;
}

} // namespace daeimp
