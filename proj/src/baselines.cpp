#include "daeimp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include "daeimp/encoding.hpp"
#include "daeimp/rng.hpp"

namespace daeimp {

Dataset mean_mode_impute(const Dataset& ds) {
    const EncodedMatrix filled = placeholder_fill(encode(ds));
    Dataset out = decode(filled.values, filled.map);
    restore_observed_cells(out, ds);
    return out;
}

namespace {

// Gaussian elimination with partial pivoting on the normal equations
// A (p x p, row-major) with multiple right-hand sides. Returns false when a
// pivot collapses; `a` and `rhs` are consumed either way.
bool solve_normal_equations(std::vector<double> a,
                            std::vector<std::vector<double>> rhs, std::size_t p,
                            std::vector<std::vector<double>>& solution) {
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r) {
            if (std::abs(a[r * p + col]) > std::abs(a[pivot * p + col])) pivot = r;
        }
        if (std::abs(a[pivot * p + col]) < 1e-12) return false;
        if (pivot != col) {
            for (std::size_t j = 0; j < p; ++j) std::swap(a[col * p + j], a[pivot * p + j]);
            for (auto& b : rhs) std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * p + col];
        for (std::size_t r = col + 1; r < p; ++r) {
            const double f = a[r * p + col] * inv;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < p; ++j) a[r * p + j] -= f * a[col * p + j];
            for (auto& b : rhs) b[r] -= f * b[col];
        }
    }
    solution.assign(rhs.size(), std::vector<double>(p, 0.0));
    for (std::size_t out = 0; out < rhs.size(); ++out) {
        for (std::size_t col = p; col-- > 0;) {
            double v = rhs[out][col];
            for (std::size_t j = col + 1; j < p; ++j) {
                v -= a[col * p + j] * solution[out][j];
            }
            solution[out][col] = v / a[col * p + col];
        }
    }
    return true;
}

struct ColumnModel {
    // Coefficient vectors, one per output column of the target block. The
    // last coefficient is the intercept.
    std::vector<std::vector<double>> beta;
};

// Least squares of the target block on all other encoded columns over the
// given rows, with a ridge retry when the plain system is singular.
ColumnModel fit_column(const Matrix& values, const ColumnSpan target,
                       const std::vector<std::size_t>& rows,
                       const std::vector<std::size_t>& feature_cols) {
    const std::size_t p = feature_cols.size() + 1; // + intercept
    std::vector<double> xtx(p * p, 0.0);
    std::vector<std::vector<double>> xty(target.width, std::vector<double>(p, 0.0));

    std::vector<double> x(p);
    for (std::size_t r : rows) {
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            x[j] = values(r, feature_cols[j]);
        }
        x[p - 1] = 1.0;
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = i; j < p; ++j) xtx[i * p + j] += x[i] * x[j];
        }
        for (std::size_t out = 0; out < target.width; ++out) {
            const double y = values(r, target.begin + out);
            for (std::size_t i = 0; i < p; ++i) xty[out][i] += x[i] * y;
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < i; ++j) xtx[i * p + j] = xtx[j * p + i];
    }

    ColumnModel model;
    if (solve_normal_equations(xtx, xty, p, model.beta)) return model;

    for (std::size_t i = 0; i < p; ++i) xtx[i * p + i] += 1e-6;
    if (solve_normal_equations(std::move(xtx), std::move(xty), p, model.beta)) {
        return model;
    }
    throw data_error("chained_pmm_impute: normal equations unsolvable even with ridge");
}

std::vector<double> predict(const ColumnModel& model, const Matrix& values,
                            std::size_t row,
                            const std::vector<std::size_t>& feature_cols) {
    std::vector<double> pred(model.beta.size(), 0.0);
    for (std::size_t out = 0; out < model.beta.size(); ++out) {
        const std::vector<double>& beta = model.beta[out];
        double v = beta.back();
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            v += beta[j] * values(row, feature_cols[j]);
        }
        pred[out] = v;
    }
    return pred;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

} // namespace

MIResult chained_pmm_impute(const Dataset& ds, const ChainedConfig& cfg) {
    if (cfg.iterations == 0 || cfg.donors == 0 || cfg.k == 0) {
        throw config_error("chained_pmm_impute: iterations, donors, and k "
                           "must all be at least 1");
    }
    if (ds.cols() < 2) {
        throw data_error("chained_pmm_impute: need at least 2 columns");
    }
    const std::size_t min_observed = std::max<std::size_t>(cfg.donors + 1, 2);
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        std::size_t observed = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r) observed += !ds.is_missing(r, c);
        if (observed < min_observed) {
            throw data_error("chained_pmm_impute: column '" + ds.schema[c].name +
                             "' has " + std::to_string(observed) +
                             " observed values, needs at least " +
                             std::to_string(min_observed));
        }
    }

    const EncodedMatrix filled = placeholder_fill(encode(ds));
    const EncodingMap& map = filled.map;

    // Per original column: observed/missing row lists and the feature set
    // (every encoded column outside the target block).
    std::vector<std::vector<std::size_t>> observed_rows(ds.cols());
    std::vector<std::vector<std::size_t>> missing_rows(ds.cols());
    std::vector<std::vector<std::size_t>> features(ds.cols());
    std::vector<std::size_t> sweep_columns;
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            (ds.is_missing(r, c) ? missing_rows : observed_rows)[c].push_back(r);
        }
        if (missing_rows[c].empty()) continue;
        sweep_columns.push_back(c);
        const ColumnSpan span = map.spans[c];
        for (std::size_t e = 0; e < map.encoded_cols; ++e) {
            if (e < span.begin || e >= span.begin + span.width) {
                features[c].push_back(e);
            }
        }
    }

    MIResult result;
    result.map = map;
    result.completions.resize(cfg.k);
    result.runs.resize(cfg.k);
    std::vector<std::exception_ptr> failures(cfg.k);

    auto run_one = [&](std::size_t run) {
        try {
            const std::uint64_t seed = run_seed(cfg.seed, run + 1);
            Rng rng(seed);
            Matrix values = filled.values;

            // Final donor row per missing cell, so the completion can carry
            // the donor's typed value exactly (decode would round continuous
            // values through the scaling).
            std::vector<std::vector<std::size_t>> final_donor(ds.cols());
            for (std::size_t c : sweep_columns) {
                final_donor[c].assign(missing_rows[c].size(), 0);
            }

            std::vector<std::size_t> order = sweep_columns;
            for (std::size_t sweep = 0; sweep < cfg.iterations; ++sweep) {
                if (cfg.random_sweep_order) rng.shuffle(order);
                for (std::size_t c : order) {
                    const ColumnSpan span = map.spans[c];
                    const ColumnModel model =
                        fit_column(values, span, observed_rows[c], features[c]);

                    std::vector<std::vector<double>> donor_pred(observed_rows[c].size());
                    for (std::size_t i = 0; i < observed_rows[c].size(); ++i) {
                        donor_pred[i] =
                            predict(model, values, observed_rows[c][i], features[c]);
                    }

                    const std::size_t pool =
                        std::min(cfg.donors, observed_rows[c].size());
                    std::vector<std::pair<double, std::size_t>> ranked(
                        observed_rows[c].size());
                    for (std::size_t m = 0; m < missing_rows[c].size(); ++m) {
                        const std::size_t r = missing_rows[c][m];
                        const std::vector<double> pred =
                            predict(model, values, r, features[c]);
                        for (std::size_t i = 0; i < donor_pred.size(); ++i) {
                            ranked[i] = {squared_distance(pred, donor_pred[i]), i};
                        }
                        std::partial_sort(ranked.begin(),
                                          ranked.begin() + static_cast<std::ptrdiff_t>(pool),
                                          ranked.end());
                        const std::size_t donor_row =
                            observed_rows[c][ranked[rng.index(pool)].second];
                        for (std::size_t j = 0; j < span.width; ++j) {
                            values(r, span.begin + j) = values(donor_row, span.begin + j);
                        }
                        final_donor[c][m] = donor_row;
                    }
                }
            }

            Dataset completion = decode(values, map);
            restore_observed_cells(completion, ds);
            for (std::size_t c : sweep_columns) {
                for (std::size_t m = 0; m < missing_rows[c].size(); ++m) {
                    completion.set_value(missing_rows[c][m], c,
                                         ds.value(final_donor[c][m], c));
                }
            }
            result.runs[run].seed = seed;
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
