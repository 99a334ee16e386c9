#include "daeimp/missingness.hpp"

#include <algorithm>
#include <string>

#include "daeimp/rng.hpp"

namespace daeimp {

const char* to_string(Mechanism m) {
    return m == Mechanism::MCAR ? "mcar" : "mnar";
}

const char* to_string(Pattern p) {
    return p == Pattern::Uniform ? "uniform" : "random";
}

Mechanism mechanism_from_string(const std::string& text) {
    if (text == "mcar") return Mechanism::MCAR;
    if (text == "mnar") return Mechanism::MNAR;
    throw config_error("unknown mechanism '" + text + "' (expected mcar or mnar)");
}

Pattern pattern_from_string(const std::string& text) {
    if (text == "uniform") return Pattern::Uniform;
    if (text == "random") return Pattern::Random;
    throw config_error("unknown pattern '" + text + "' (expected uniform or random)");
}

namespace {

double lower_median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

} // namespace

InducedDataset induce(const Dataset& ds, const MissingnessSpec& spec) {
    if (spec.t < 0.0 || spec.t > 1.0) {
        throw config_error("induce: t must lie in [0, 1]");
    }
    if (ds.missing_count() != 0) {
        throw data_error("induce: input already has missing cells; "
                         "a complete dataset is required");
    }
    const std::size_t n = ds.rows();
    const std::size_t m = ds.cols();
    if (n == 0 || m == 0) throw data_error("induce: empty dataset");
    if (spec.mechanism == Mechanism::MNAR && m < 2) {
        throw data_error("induce: the value condition needs 2 driver columns, "
                         "dataset has fewer");
    }

    Rng rng(spec.seed);

    // 1. Row-selection vector v.
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform();

    InducedDataset ind;
    ind.truth = ds;
    ind.observed = ds;

    // 2. Driver columns and their medians (MNAR only). Prefer continuous
    // columns; orders/labels fall back to their category ranks.
    std::vector<std::uint8_t> row_ok(n, 1);
    if (spec.mechanism == Mechanism::MNAR) {
        std::vector<std::size_t> pool;
        for (std::size_t c = 0; c < m; ++c) {
            if (ds.schema[c].kind == ColumnKind::Continuous) pool.push_back(c);
        }
        if (pool.size() < 2) {
            pool.resize(m);
            for (std::size_t c = 0; c < m; ++c) pool[c] = c;
        }
        const std::vector<std::size_t> pick = rng.sample_indices(pool.size(), 2);
        ind.driver_columns = {pool[pick[0]], pool[pick[1]]};
        for (std::size_t d : ind.driver_columns) {
            ind.driver_medians.push_back(lower_median(ds.columns[d]));
        }
        const std::vector<double>& x1 = ds.columns[ind.driver_columns[0]];
        const std::vector<double>& x2 = ds.columns[ind.driver_columns[1]];
        for (std::size_t r = 0; r < n; ++r) {
            row_ok[r] = x1[r] <= ind.driver_medians[0] || x2[r] >= ind.driver_medians[1];
        }
    }

    // 3. Attribute subset (Random pattern only): floor(m/2) attributes,
    // sampled once for the whole run.
    std::vector<std::uint8_t> attr_masked(m, 1);
    if (spec.pattern == Pattern::Random) {
        attr_masked.assign(m, 0);
        ind.masked_attributes = rng.sample_indices(m, m / 2);
        std::sort(ind.masked_attributes.begin(), ind.masked_attributes.end());
        for (std::size_t c : ind.masked_attributes) attr_masked[c] = 1;
    }

    std::size_t masked = 0;
    for (std::size_t r = 0; r < n; ++r) {
        if (!(v[r] <= spec.t) || !row_ok[r]) continue;
        for (std::size_t c = 0; c < m; ++c) {
            if (!attr_masked[c]) continue;
            ind.observed.set_missing(r, c);
            ++masked;
        }
    }

    ind.induced_mask = ind.observed.missing;
    ind.achieved_proportion =
        static_cast<double>(masked) / static_cast<double>(n * m);
    return ind;
}

MissingnessStats achieved_stats(const InducedDataset& ind) {
    const std::size_t n = ind.truth.rows();
    const std::size_t m = ind.truth.cols();
    MissingnessStats stats;
    stats.column_fractions.resize(m, 0.0);

    std::size_t total = 0;
    std::vector<std::uint8_t> row_hit(n, 0);
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t count = 0;
        for (std::size_t r = 0; r < n; ++r) {
            if (ind.induced_mask[c][r]) {
                ++count;
                row_hit[r] = 1;
            }
        }
        stats.column_fractions[c] =
            static_cast<double>(count) / static_cast<double>(n);
        total += count;
    }
    stats.overall_fraction = static_cast<double>(total) / static_cast<double>(n * m);
    for (std::uint8_t h : row_hit) stats.rows_masked += h;

    if (ind.driver_columns.size() == 2) {
        const std::vector<double>& x1 = ind.truth.columns[ind.driver_columns[0]];
        const std::vector<double>& x2 = ind.truth.columns[ind.driver_columns[1]];
        std::size_t hits = 0;
        for (std::size_t r = 0; r < n; ++r) {
            hits += x1[r] <= ind.driver_medians[0] || x2[r] >= ind.driver_medians[1];
        }
        stats.row_condition_hit_rate =
            static_cast<double>(hits) / static_cast<double>(n);
    } else {
        stats.row_condition_hit_rate = 1.0;
    }
    return stats;
}

} // namespace daeimp
