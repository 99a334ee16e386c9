// Acceptance gate: one scenario per release criterion. Each criterion prints
// a single [PASS]/[FAIL] line with a measured detail, and the process exits
// with the number of failures so the gate stays honest under ctest. Scenarios
// reuse the public library API only — no test framework, no private hooks.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "daeimp/baselines.hpp"
#include "daeimp/csv.hpp"
#include "daeimp/dae.hpp"
#include "daeimp/dataset.hpp"
#include "daeimp/downstream.hpp"
#include "daeimp/encoding.hpp"
#include "daeimp/errors.hpp"
#include "daeimp/metrics.hpp"
#include "daeimp/mi.hpp"
#include "daeimp/missingness.hpp"
#include "daeimp/nn.hpp"
#include "daeimp/rng.hpp"

namespace {

using namespace daeimp;

#ifndef DAEIMP_SOURCE_DIR
#error "DAEIMP_SOURCE_DIR must be defined by the build"
#endif

bool bits_equal(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::string fmt(const char* pattern, ...) {
    char buf[256];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// Dataset builders.

// Independent uniform columns in [0, 1].
Dataset uniform_table(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::vector<ColumnSchema> schema(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        schema[c].name = "u" + std::to_string(c);
        schema[c].kind = ColumnKind::Continuous;
    }
    Dataset ds(schema, rows);
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) ds.set_value(r, c, rng.uniform());
    }
    return ds;
}

// Continuous columns sharing one latent driver per row; every pair of
// columns ends up correlated at roughly 0.99.
Dataset correlated_table(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::vector<ColumnSchema> schema(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        schema[c].name = "x" + std::to_string(c);
        schema[c].kind = ColumnKind::Continuous;
    }
    Dataset ds(schema, rows);
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        const double z = rng.uniform();
        for (std::size_t c = 0; c < cols; ++c) {
            ds.set_value(r, c, 0.9 * z + 0.1 * rng.uniform());
        }
    }
    return ds;
}

// Correlated features plus a two-class label that follows the shared driver,
// so a neighborhood vote can actually learn it.
Dataset labeled_table(std::size_t rows, std::uint64_t seed) {
    std::vector<ColumnSchema> schema(7);
    for (std::size_t c = 0; c < 6; ++c) {
        schema[c].name = "x" + std::to_string(c);
        schema[c].kind = ColumnKind::Continuous;
    }
    schema[6].name = "label";
    schema[6].kind = ColumnKind::Categorical;
    schema[6].categories = {"lo", "hi"};
    Dataset ds(schema, rows);
    Rng rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        const double z = rng.uniform();
        for (std::size_t c = 0; c < 6; ++c) {
            ds.set_value(r, c, 0.9 * z + 0.1 * rng.uniform());
        }
        ds.set_value(r, 6, z > 0.5 ? 1.0 : 0.0);
    }
    return ds;
}

// Random schema with mixed kinds, ~20% missing cells, and at least one
// observed cell per column so the encoder accepts it.
Dataset random_mixed_dataset(Rng& rng) {
    const std::size_t rows = 5 + rng.index(21);
    const std::size_t cols = 1 + rng.index(6);
    std::vector<ColumnSchema> schema(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        schema[c].name = "c" + std::to_string(c);
        const std::size_t pick = rng.index(3);
        schema[c].kind = pick == 0   ? ColumnKind::Continuous
                         : pick == 1 ? ColumnKind::Categorical
                                     : ColumnKind::Ordinal;
        if (schema[c].kind != ColumnKind::Continuous) {
            const std::size_t k = 2 + rng.index(4);
            for (std::size_t i = 0; i < k; ++i) {
                schema[c].categories.push_back("v" + std::to_string(i));
            }
        }
    }
    Dataset ds(schema, rows);
    for (std::size_t c = 0; c < cols; ++c) {
        const double lo = rng.uniform(-100.0, 100.0);
        const double hi = lo + rng.uniform(0.5, 200.0);
        for (std::size_t r = 0; r < rows; ++r) {
            if (rng.uniform() < 0.2) {
                ds.set_missing(r, c);
            } else if (schema[c].kind == ColumnKind::Continuous) {
                ds.set_value(r, c, rng.uniform(lo, hi));
            } else {
                ds.set_value(r, c,
                             static_cast<double>(rng.index(schema[c].categories.size())));
            }
        }
        bool any = false;
        for (std::size_t r = 0; r < rows; ++r) any = any || !ds.is_missing(r, c);
        if (!any) {
            ds.set_value(0, c,
                         schema[c].kind == ColumnKind::Continuous
                             ? rng.uniform(lo, hi)
                             : static_cast<double>(rng.index(schema[c].categories.size())));
        }
    }
    return ds;
}

double pearson(const Dataset& ds, std::size_t a, std::size_t b) {
    const std::size_t n = ds.rows();
    double ma = 0.0, mb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        ma += ds.value(r, a);
        mb += ds.value(r, b);
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        const double da = ds.value(r, a) - ma;
        const double db = ds.value(r, b) - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    return sab / std::sqrt(saa * sbb);
}

// Scores completions against the ground truth over the induced cells, in the
// truth's encoded space (the same convention the batch tool uses).
struct Scorer {
    EncodedMatrix truth_enc;
    Matrix mask;

    explicit Scorer(const InducedDataset& ind)
        : truth_enc(encode(ind.truth)),
          mask(ind.truth.rows(), truth_enc.map.encoded_cols) {
        for (std::size_t c = 0; c < ind.induced_mask.size(); ++c) {
            const ColumnSpan span = truth_enc.map.spans[c];
            for (std::size_t r = 0; r < ind.truth.rows(); ++r) {
                if (!ind.induced_mask[c][r]) continue;
                for (std::size_t j = 0; j < span.width; ++j) {
                    mask(r, span.begin + j) = 1.0;
                }
            }
        }
    }

    double operator()(const Dataset& completion) const {
        const EncodedMatrix imp = apply_encoding(completion, truth_enc.map);
        return rmse_sum(imp.values, truth_enc.values, mask, truth_enc.map).rmse_sum;
    }

    std::vector<double> score_all(const std::vector<Dataset>& completions) const {
        std::vector<double> out;
        out.reserve(completions.size());
        for (const Dataset& c : completions) out.push_back((*this)(c));
        return out;
    }
};

// ---------------------------------------------------------------------------
// Reporting.

struct Gate {
    int failures = 0;

    void report(int id, const char* name, bool pass, const std::string& detail) {
        std::printf("[%s] %2d. %s%s%s\n", pass ? "PASS" : "FAIL", id, name,
                    detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failures;
    }

    template <typename Fn>
    void run(int id, const char* name, Fn&& fn) {
        try {
            const std::pair<bool, std::string> result = fn();
            report(id, name, result.first, result.second);
        } catch (const std::exception& e) {
            report(id, name, false, std::string("exception: ") + e.what());
        }
    }
};

using Outcome = std::pair<bool, std::string>;

// ---------------------------------------------------------------------------
// Criteria.

// 1. Analytic gradients agree with central finite differences across random
//    small network shapes.
Outcome criterion_gradients() {
    Rng meta(1234);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + meta.index(10);
        const std::size_t theta = 1 + meta.index(7);
        DAENetwork net = build_dae(n, theta, 1000 + static_cast<std::uint64_t>(trial));
        Matrix input(3, n);
        Matrix target(3, n);
        for (double& v : input.data) v = meta.uniform();
        for (double& v : target.data) v = meta.uniform();
        worst = std::max(worst, gradient_check(net.layers, input, target, 1e-5));
    }
    return {worst < 1e-6, fmt("20 random shapes, worst relative error %.3g", worst)};
}

// 2. Hidden widths ramp up by theta per encoder layer and mirror back down.
Outcome criterion_widths() {
    bool ok = DAEArchitecture{14, 7, 3}.widths() ==
              std::vector<std::size_t>{14, 21, 28, 35, 28, 21, 14};
    int pairs = 0;
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{5},
                          std::size_t{9}, std::size_t{14}, std::size_t{20}}) {
        for (std::size_t theta : {std::size_t{1}, std::size_t{3}, std::size_t{7}}) {
            const std::vector<std::size_t> expect{n,         n + theta, n + 2 * theta,
                                                  n + 3 * theta, n + 2 * theta,
                                                  n + theta, n};
            const std::vector<std::size_t> widths =
                DAEArchitecture{n, theta, 3}.widths();
            ok = ok && widths == expect;
            const DAENetwork net = build_dae(n, theta, 42);
            ok = ok && net.layers.size() == widths.size() - 1;
            for (std::size_t i = 0; ok && i + 1 < widths.size(); ++i) {
                ok = net.layers[i].in_dim() == widths[i] &&
                     net.layers[i].out_dim() == widths[i + 1];
            }
            ++pairs;
        }
    }
    return {ok, fmt("ramp [n, n+t, n+2t, n+3t] and mirror hold for %d shapes "
                    "(14,7 -> 14,21,28,35,28,21,14)",
                    pairs)};
}

// 3. Input corruption at rate 0.5 zeroes half the entries, every seed.
Outcome criterion_corruption() {
    const Matrix base(1000, 20, 1.0);
    double lo = 1.0, hi = 0.0;
    for (int s = 0; s < 10; ++s) {
        Rng rng(2000 + static_cast<std::uint64_t>(s));
        const Matrix corrupted = corrupt(base, 0.5, rng);
        std::size_t zeros = 0;
        for (double v : corrupted.data) zeros += v == 0.0;
        const double frac = static_cast<double>(zeros) / static_cast<double>(base.data.size());
        lo = std::min(lo, frac);
        hi = std::max(hi, frac);
    }
    const bool ok = lo >= 0.48 && hi <= 0.52;
    return {ok, fmt("zeroed fraction across 10 seeds in [%.4f, %.4f] (band 0.5 +/- 0.02)",
                    lo, hi)};
}

// 4. Whole-row masking hits its nominal rate on a large table, and every row
//    masked by the value-driven mechanism satisfies the driver predicate.
Outcome criterion_missingness() {
    const Dataset big = uniform_table(10000, 4, 404);
    const InducedDataset mcar =
        induce(big, {Mechanism::MCAR, Pattern::Uniform, 0.2, 405});
    const bool rate_ok =
        mcar.achieved_proportion >= 0.18 && mcar.achieved_proportion <= 0.22;

    const Dataset mid = uniform_table(4000, 5, 414);
    std::size_t masked_rows = 0;
    std::size_t violations = 0;
    for (Pattern pattern : {Pattern::Uniform, Pattern::Random}) {
        const InducedDataset ind = induce(
            mid, {Mechanism::MNAR, pattern, 0.3,
                  pattern == Pattern::Uniform ? std::uint64_t{415} : std::uint64_t{425}});
        const std::size_t d1 = ind.driver_columns.at(0);
        const std::size_t d2 = ind.driver_columns.at(1);
        const double m1 = ind.driver_medians.at(0);
        const double m2 = ind.driver_medians.at(1);
        for (std::size_t r = 0; r < ind.truth.rows(); ++r) {
            bool any = false;
            for (std::size_t c = 0; c < ind.truth.cols(); ++c) {
                any = any || ind.induced_mask[c][r];
            }
            if (!any) continue;
            ++masked_rows;
            const bool holds =
                ind.truth.value(r, d1) <= m1 || ind.truth.value(r, d2) >= m2;
            violations += holds ? 0 : 1;
        }
    }
    const bool ok = rate_ok && masked_rows > 0 && violations == 0;
    return {ok, fmt("mcar fraction %.4f (band [0.18, 0.22]); %zu value-masked rows, "
                    "%zu predicate violations",
                    mcar.achieved_proportion, masked_rows, violations)};
}

// 5. Multiple imputation: observed cells exact across completions, imputed
//    cells vary between runs, and the whole procedure is bit-reproducible.
Outcome criterion_mi_contract() {
    const Dataset base = uniform_table(70, 4, 500);
    const InducedDataset ind =
        induce(base, {Mechanism::MCAR, Pattern::Uniform, 0.3, 515});

    MIConfig cfg;
    cfg.k = 5;
    cfg.theta = 3;
    cfg.train.epochs = 25;
    cfg.master_seed = 505;
    const MIResult first = multiple_impute(ind.observed, cfg);

    bool observed_exact = first.completions.size() == 5;
    for (const Dataset& comp : first.completions) {
        for (std::size_t c = 0; c < base.cols(); ++c) {
            for (std::size_t r = 0; r < base.rows(); ++r) {
                if (ind.observed.is_missing(r, c)) continue;
                observed_exact = observed_exact && !comp.is_missing(r, c) &&
                                 bits_equal(comp.value(r, c), ind.observed.value(r, c));
            }
        }
    }

    std::size_t cells = 0;
    std::size_t varied = 0;
    for (std::size_t c = 0; c < base.cols(); ++c) {
        for (std::size_t r = 0; r < base.rows(); ++r) {
            if (!ind.observed.is_missing(r, c)) continue;
            ++cells;
            std::vector<std::uint64_t> values;
            for (const Dataset& comp : first.completions) {
                values.push_back(std::bit_cast<std::uint64_t>(comp.value(r, c)));
            }
            std::sort(values.begin(), values.end());
            varied += std::unique(values.begin(), values.end()) - values.begin() >= 2;
        }
    }
    const double vary_frac =
        cells == 0 ? 0.0 : static_cast<double>(varied) / static_cast<double>(cells);

    const MIResult second = multiple_impute(ind.observed, cfg);
    bool reproducible = second.completions.size() == first.completions.size();
    for (std::size_t i = 0; reproducible && i < first.completions.size(); ++i) {
        for (std::size_t c = 0; c < base.cols(); ++c) {
            for (std::size_t r = 0; r < base.rows(); ++r) {
                reproducible = reproducible &&
                               bits_equal(first.completions[i].value(r, c),
                                          second.completions[i].value(r, c));
            }
        }
    }

    const bool ok = observed_exact && vary_frac >= 0.5 && reproducible;
    return {ok, fmt("observed cells exact: %s; %.0f%% of %zu missing cells vary "
                    "(need >= 50%%); rerun bit-identical: %s",
                    observed_exact ? "yes" : "NO", 100.0 * vary_frac, cells,
                    reproducible ? "yes" : "NO")};
}

// 6. Correlation preservation under whole-row masking: the autoencoder must
//    beat mean/mode by 10% on a strongly correlated table. When an entire
//    row is hidden the network sees only placeholder inputs, so no
//    cross-column signal survives to exploit — the measured ratio documents
//    how close to the mean/mode floor the model lands. The partial-row
//    variant is reported afterwards as an informational line.
Outcome criterion_correlation(double* random_pattern_ratio) {
    const Dataset table = correlated_table(1000, 6, 606);
    double min_corr = 1.0;
    for (std::size_t a = 0; a < table.cols(); ++a) {
        for (std::size_t b = a + 1; b < table.cols(); ++b) {
            min_corr = std::min(min_corr, pearson(table, a, b));
        }
    }

    const InducedDataset ind =
        induce(table, {Mechanism::MCAR, Pattern::Uniform, 0.2, 616});
    MIConfig cfg;
    cfg.master_seed = 626;
    // Quality criteria measure the converged model: with the stall window
    // below the budget, runs stop after a dozen epochs and the comparison
    // would measure initialization noise instead.
    cfg.train.sma_window = cfg.train.epochs;
    const MIResult dae = multiple_impute(ind.observed, cfg);
    const Scorer score(ind);
    const std::vector<double> e_dae = score.score_all(dae.completions);
    const std::vector<double> e_mm(cfg.k, score(mean_mode_impute(ind.observed)));
    const double ratio = error_ratio(e_dae, e_mm);
    const bool ok = min_corr >= 0.8 && pool(e_dae).mean < pool(e_mm).mean && ratio < 0.9;

    // Same table and rate, but masking a random attribute subset instead of
    // whole rows, so observed columns can inform the hidden ones.
    const InducedDataset partial =
        induce(table, {Mechanism::MCAR, Pattern::Random, 0.2, 617});
    MIConfig pcfg;
    pcfg.master_seed = 627;
    pcfg.train.sma_window = pcfg.train.epochs;
    const MIResult pdae = multiple_impute(partial.observed, pcfg);
    const Scorer pscore(partial);
    *random_pattern_ratio =
        error_ratio(pscore.score_all(pdae.completions),
                    std::vector<double>(pcfg.k, pscore(mean_mode_impute(partial.observed))));

    return {ok, fmt("whole-row masking: error ratio vs mean/mode %.3f (needs < 0.9); "
                    "min pairwise correlation %.3f",
                    ratio, min_corr)};
}

// 7. Housing benchmark: pooled error over k=5 default runs lands inside the
//    expected band, well under the time budget.
Outcome criterion_housing() {
    const auto start = std::chrono::steady_clock::now();
    const Dataset boston =
        load_csv(std::string(DAEIMP_SOURCE_DIR) + "/data/boston_housing.csv");
    if (boston.rows() != 506 || boston.cols() != 14) {
        return {false, fmt("fixture is %zux%zu, expected 506x14", boston.rows(),
                           boston.cols())};
    }
    const InducedDataset ind =
        induce(boston, {Mechanism::MCAR, Pattern::Uniform, 0.2, 707});
    MIConfig cfg;
    cfg.master_seed = 717;
    const MIResult result = multiple_impute(ind.observed, cfg);
    const Scorer score(ind);
    const PooledStat pooled = pool(score.score_all(result.completions));
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = pooled.mean >= 2.0 && pooled.mean <= 4.2 && secs < 600.0;
    return {ok, fmt("pooled error sum %.3f [%.3f, %.3f] on 506x14 in %.1f s "
                    "(band [2.0, 4.2], budget 600 s)",
                    pooled.mean, pooled.min, pooled.max, secs)};
}

// 8. The error ratio against chained-equations PMM stays bounded as the
//    missingness rate grows under value-driven whole-row masking.
Outcome criterion_sweep() {
    const Dataset table = correlated_table(1000, 6, 606);
    std::string detail = "error ratio vs chained-pmm:";
    bool ok = true;
    int step = 0;
    for (const double t : {0.2, 0.4, 0.6}) {
        const InducedDataset ind =
            induce(table, {Mechanism::MNAR, Pattern::Uniform, t,
                           800 + static_cast<std::uint64_t>(step)});
        MIConfig mc;
        mc.master_seed = 810 + static_cast<std::uint64_t>(step);
        mc.train.sma_window = mc.train.epochs; // measure the converged model
        const MIResult dae = multiple_impute(ind.observed, mc);
        ChainedConfig cc;
        cc.seed = 820 + static_cast<std::uint64_t>(step);
        const MIResult pmm = chained_pmm_impute(ind.observed, cc);
        const Scorer score(ind);
        const double ratio =
            error_ratio(score.score_all(dae.completions), score.score_all(pmm.completions));
        ok = ok && ratio < 1.1;
        detail += fmt(" t=%.1f -> %.3f", t, ratio);
        ++step;
    }
    detail += " (each < 1.1)";
    return {ok, detail};
}

// 9. Downstream classification: a neighborhood vote trained on autoencoder
//    completions keeps up with one trained on mean/mode completions.
Outcome criterion_downstream() {
    const Dataset table = labeled_table(600, 909);
    const InducedDataset ind =
        induce(table, {Mechanism::MNAR, Pattern::Uniform, 0.2, 919});
    MIConfig mc;
    mc.master_seed = 929;
    mc.train.sma_window = mc.train.epochs; // measure the converged model
    const MIResult dae = multiple_impute(ind.observed, mc);
    const std::vector<Dataset> mm(5, mean_mode_impute(ind.observed));

    EvalConfig ec;
    ec.target_column = "label";
    ec.seed = 939;
    const std::vector<MethodScore> scores =
        compare_methods({{"dae", dae.completions}, {"meanmode", mm}}, ec);
    const double acc_dae = scores.at(0).mean_score;
    const double acc_mm = scores.at(1).mean_score;
    const bool ok = scores.at(0).task == TaskKind::Classification &&
                    acc_dae >= acc_mm - 0.02;
    return {ok, fmt("5x5-fold accuracy: autoencoder %.4f vs mean/mode %.4f "
                    "(allowed slack 0.02)",
                    acc_dae, acc_mm)};
}

// 10. Round-trips: decoding an encoded dataset restores observed cells
//     (discrete kinds bit-exactly, scaled kinds to within a few ulp before
//     the observed-cell restoration makes them bit-exact too), and CSV
//     save/load preserves payload and missingness marks exactly.
Outcome criterion_round_trips() {
    Rng rng(1010);
    const std::string scratch =
        "/tmp/daeimp_acceptance_" + std::to_string(getpid()) + ".csv";
    const double eps = std::numeric_limits<double>::epsilon();
    bool discrete_ok = true;
    bool continuous_ok = true;
    bool restore_ok = true;
    bool csv_ok = true;
    for (int i = 0; i < 100; ++i) {
        const Dataset ds = random_mixed_dataset(rng);
        const EncodedMatrix enc = encode(ds);
        Dataset decoded = decode(enc.values, enc.map);
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            const ColumnSchema& learned = enc.map.schema[c];
            const double scale = std::max({std::abs(learned.min), std::abs(learned.max),
                                           learned.max - learned.min});
            for (std::size_t r = 0; r < ds.rows(); ++r) {
                if (ds.is_missing(r, c)) continue;
                if (ds.schema[c].kind == ColumnKind::Continuous) {
                    continuous_ok = continuous_ok &&
                                    std::abs(decoded.value(r, c) - ds.value(r, c)) <=
                                        4.0 * eps * scale;
                } else {
                    discrete_ok =
                        discrete_ok && bits_equal(decoded.value(r, c), ds.value(r, c));
                }
            }
        }
        restore_observed_cells(decoded, ds);
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            for (std::size_t r = 0; r < ds.rows(); ++r) {
                if (ds.is_missing(r, c)) continue;
                restore_ok = restore_ok && !decoded.is_missing(r, c) &&
                             bits_equal(decoded.value(r, c), ds.value(r, c));
            }
        }

        save_csv(scratch, ds);
        const Dataset back = load_csv(scratch);
        csv_ok = csv_ok && back.rows() == ds.rows() && back.cols() == ds.cols();
        for (std::size_t c = 0; csv_ok && c < ds.cols(); ++c) {
            for (std::size_t r = 0; r < ds.rows(); ++r) {
                if (back.is_missing(r, c) != ds.is_missing(r, c)) {
                    csv_ok = false;
                    break;
                }
                if (ds.is_missing(r, c)) continue;
                if (ds.schema[c].kind == ColumnKind::Continuous) {
                    csv_ok = csv_ok && bits_equal(back.value(r, c), ds.value(r, c));
                } else {
                    // Loading re-learns the label list, so compare by text.
                    const std::string& got =
                        back.schema[c]
                            .categories[static_cast<std::size_t>(back.value(r, c))];
                    const std::string& want =
                        ds.schema[c]
                            .categories[static_cast<std::size_t>(ds.value(r, c))];
                    csv_ok = csv_ok && got == want;
                }
            }
        }
    }
    std::remove(scratch.c_str());
    const bool ok = discrete_ok && continuous_ok && restore_ok && csv_ok;
    return {ok, fmt("100 random schemas: discrete decode exact %s, scaled decode "
                    "within 4 ulp-scale %s, restored cells bit-exact %s, csv "
                    "round-trip exact %s",
                    discrete_ok ? "yes" : "NO", continuous_ok ? "yes" : "NO",
                    restore_ok ? "yes" : "NO", csv_ok ? "yes" : "NO")};
}

// 11. Early stopping: constant data stops well before the epoch budget, and
//     no run ever exceeds its budget.
Outcome criterion_early_stop() {
    std::vector<ColumnSchema> schema(4);
    schema[0] = {"a", ColumnKind::Continuous, {}, 0.0, 0.0};
    schema[1] = {"b", ColumnKind::Continuous, {}, 0.0, 0.0};
    schema[2] = {"c", ColumnKind::Continuous, {}, 0.0, 0.0};
    schema[3] = {"tag", ColumnKind::Categorical, {"only"}, 0.0, 0.0};
    Dataset constant(schema, 60);
    for (std::size_t r = 0; r < 60; ++r) {
        constant.set_value(r, 0, 3.7);
        constant.set_value(r, 1, -1.25);
        constant.set_value(r, 2, 42.0);
        constant.set_value(r, 3, 0.0);
    }
    const EncodedMatrix enc = encode(constant);
    DAENetwork net = build_dae(enc.map.encoded_cols, 7, 1111);
    TrainConfig tc;
    tc.seed = 1112;
    const TrainHistory history = train_dae(net, enc.values, tc);
    const bool early = history.epochs_run < tc.epochs &&
                       (history.stop_reason == StopReason::TargetMSE ||
                        history.stop_reason == StopReason::SMAStall) &&
                       history.epoch_loss.size() == history.epochs_run;

    // A noisy input with a tiny budget and a stall window larger than the
    // budget: only the budget itself can stop this run.
    Matrix noisy(48, 6);
    Rng rng(1113);
    for (double& v : noisy.data) v = rng.uniform();
    DAENetwork net2 = build_dae(6, 7, 1114);
    TrainConfig tc2;
    tc2.epochs = 12;
    tc2.sma_window = 200;
    tc2.seed = 1115;
    const TrainHistory capped = train_dae(net2, noisy, tc2);
    const bool budget = capped.epochs_run <= tc2.epochs &&
                        capped.epoch_loss.size() == capped.epochs_run;

    const bool ok = early && budget;
    return {ok, fmt("constant data stopped at epoch %zu of %zu (%s); "
                    "budget-capped run used %zu of %zu epochs",
                    history.epochs_run, tc.epochs, to_string(history.stop_reason),
                    capped.epochs_run, tc2.epochs)};
}

} // namespace

int main() {
    Gate gate;
    gate.run(1, "analytic gradients match central finite differences",
             criterion_gradients);
    gate.run(2, "hidden widths ramp up by theta and mirror back down",
             criterion_widths);
    gate.run(3, "input corruption zeroes half the entries", criterion_corruption);
    gate.run(4, "induced missingness hits its rate and value predicate",
             criterion_missingness);
    gate.run(5, "multiple imputation is exact, varied, and reproducible",
             criterion_mi_contract);

    double partial_ratio = std::numeric_limits<double>::quiet_NaN();
    gate.run(6, "autoencoder beats mean/mode on correlated whole-row gaps",
             [&partial_ratio] { return criterion_correlation(&partial_ratio); });
    if (std::isfinite(partial_ratio)) {
        std::printf("[INFO]  6. partial-row masking variant on the same table: "
                    "error ratio vs mean/mode %.3f\n",
                    partial_ratio);
        std::fflush(stdout);
    }

    gate.run(7, "housing benchmark lands in the expected error band",
             criterion_housing);
    gate.run(8, "error ratio vs chained-pmm stays bounded as gaps grow",
             criterion_sweep);
    gate.run(9, "downstream classification accuracy survives imputation",
             criterion_downstream);
    gate.run(10, "encode/decode and csv round-trips preserve observed data",
             criterion_round_trips);
    gate.run(11, "training stops early on constant data and obeys budgets",
             criterion_early_stop);

    std::printf("acceptance: %d of 11 criteria passed\n", 11 - gate.failures);
    return gate.failures;
}
