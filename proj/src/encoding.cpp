#include "daeimp/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace daeimp {

namespace {

std::size_t span_width(const ColumnSchema& sc) {
    return sc.kind == ColumnKind::Categorical ? sc.categories.size() : 1;
}

EncodingMap build_map(const std::vector<ColumnSchema>& schema) {
    EncodingMap map;
    map.schema = schema;
    map.spans.resize(schema.size());
    std::size_t at = 0;
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (schema[c].kind != ColumnKind::Continuous && schema[c].categories.empty()) {
            throw data_error("column '" + schema[c].name +
                             "' has no categories to encode");
        }
        map.spans[c] = ColumnSpan{at, span_width(schema[c])};
        at += map.spans[c].width;
    }
    map.encoded_cols = at;
    return map;
}

double scale_continuous(double x, double min, double max) {
    if (max > min) return (x - min) / (max - min);
    return 0.5 + (x - min); // constant learned range: keep deviations linear
}

double ordinal_rank_scale(double index, std::size_t k) {
    if (k <= 1) return 0.5;
    return index / static_cast<double>(k - 1);
}

// Shared by encode (self-learned stats) and apply_encoding (foreign stats).
// `relabel` maps ds category indices to map category indices.
EncodedMatrix encode_with(const Dataset& ds, EncodingMap map,
                          const std::vector<std::vector<std::size_t>>* relabel) {
    const std::size_t n = ds.rows();
    EncodedMatrix enc;
    enc.values = Matrix(n, map.encoded_cols);
    enc.mask = Matrix(n, map.encoded_cols);

    for (std::size_t c = 0; c < ds.cols(); ++c) {
        const ColumnSchema& sc = map.schema[c];
        const ColumnSpan span = map.spans[c];
        for (std::size_t r = 0; r < n; ++r) {
            if (ds.is_missing(r, c)) {
                for (std::size_t j = 0; j < span.width; ++j) {
                    enc.mask(r, span.begin + j) = 1.0;
                }
                continue;
            }
            const double v = ds.value(r, c);
            switch (sc.kind) {
                case ColumnKind::Continuous:
                    enc.values(r, span.begin) = scale_continuous(v, sc.min, sc.max);
                    break;
                case ColumnKind::Ordinal: {
                    std::size_t idx = static_cast<std::size_t>(v);
                    if (relabel) idx = (*relabel)[c][idx];
                    enc.values(r, span.begin) =
                        ordinal_rank_scale(static_cast<double>(idx), sc.categories.size());
                    break;
                }
                case ColumnKind::Categorical: {
                    std::size_t idx = static_cast<std::size_t>(v);
                    if (relabel) idx = (*relabel)[c][idx];
                    enc.values(r, span.begin + idx) = 1.0;
                    break;
                }
            }
        }
    }
    enc.map = std::move(map);
    return enc;
}

} // namespace

EncodedMatrix encode(const Dataset& ds) {
    std::vector<ColumnSchema> schema = ds.schema;
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        std::size_t observed = 0;
        for (std::size_t r = 0; r < ds.rows(); ++r) observed += !ds.is_missing(r, c);
        if (observed == 0) {
            throw data_error("column '" + schema[c].name +
                             "' has no observed values; cannot encode");
        }
        if (schema[c].kind == ColumnKind::Continuous) {
            double lo = 0.0, hi = 0.0;
            bool seen = false;
            for (std::size_t r = 0; r < ds.rows(); ++r) {
                if (ds.is_missing(r, c)) continue;
                const double v = ds.value(r, c);
                if (!seen) {
                    lo = hi = v;
                    seen = true;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            schema[c].min = lo;
            schema[c].max = hi;
        }
    }
    return encode_with(ds, build_map(schema), nullptr);
}

EncodedMatrix apply_encoding(const Dataset& ds, const EncodingMap& map) {
    if (ds.cols() != map.schema.size()) {
        throw data_error("apply_encoding: dataset has " + std::to_string(ds.cols()) +
                         " columns, map describes " + std::to_string(map.schema.size()));
    }
    // Category indices in `ds` refer to its own label order; translate each
    // label into the map's order.
    std::vector<std::vector<std::size_t>> relabel(ds.cols());
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        const ColumnSchema& mine = ds.schema[c];
        const ColumnSchema& theirs = map.schema[c];
        if (mine.kind != theirs.kind) {
            throw data_error("apply_encoding: column '" + mine.name +
                             "' kind differs from the map's");
        }
        if (mine.kind == ColumnKind::Continuous) continue;
        relabel[c].resize(mine.categories.size());
        for (std::size_t k = 0; k < mine.categories.size(); ++k) {
            auto it = std::find(theirs.categories.begin(), theirs.categories.end(),
                                mine.categories[k]);
            if (it == theirs.categories.end()) {
                throw data_error("apply_encoding: column '" + mine.name + "' label '" +
                                 mine.categories[k] + "' is unknown to the map");
            }
            relabel[c][k] = static_cast<std::size_t>(it - theirs.categories.begin());
        }
    }
    return encode_with(ds, map, &relabel);
}

EncodedMatrix placeholder_fill(const EncodedMatrix& enc) {
    EncodedMatrix out = enc;
    const std::size_t n = enc.values.rows;
    for (std::size_t c = 0; c < enc.map.schema.size(); ++c) {
        const ColumnSchema& sc = enc.map.schema[c];
        const ColumnSpan span = enc.map.spans[c];

        std::size_t observed = 0;
        for (std::size_t r = 0; r < n; ++r) {
            observed += enc.mask(r, span.begin) == 0.0;
        }
        if (observed == 0) {
            throw data_error("column '" + sc.name +
                             "' has no observed values to build a placeholder from");
        }
        if (observed == n) continue;

        if (sc.kind == ColumnKind::Categorical) {
            std::vector<std::size_t> counts(span.width, 0);
            for (std::size_t r = 0; r < n; ++r) {
                if (enc.mask(r, span.begin) != 0.0) continue;
                std::size_t best = 0;
                for (std::size_t j = 1; j < span.width; ++j) {
                    if (enc.values(r, span.begin + j) > enc.values(r, span.begin + best)) {
                        best = j;
                    }
                }
                ++counts[best];
            }
            const std::size_t modal = static_cast<std::size_t>(
                std::max_element(counts.begin(), counts.end()) - counts.begin());
            for (std::size_t r = 0; r < n; ++r) {
                if (enc.mask(r, span.begin) == 0.0) continue;
                for (std::size_t j = 0; j < span.width; ++j) {
                    out.values(r, span.begin + j) = j == modal ? 1.0 : 0.0;
                }
            }
        } else {
            double sum = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                if (enc.mask(r, span.begin) == 0.0) sum += enc.values(r, span.begin);
            }
            const double mean = sum / static_cast<double>(observed);
            for (std::size_t r = 0; r < n; ++r) {
                if (enc.mask(r, span.begin) != 0.0) out.values(r, span.begin) = mean;
            }
        }
    }
    return out;
}

Dataset decode(const Matrix& values, const EncodingMap& map) {
    if (values.cols != map.encoded_cols) {
        throw shape_error("decode: matrix has " + std::to_string(values.cols) +
                          " columns, map encodes " + std::to_string(map.encoded_cols));
    }
    Dataset ds(map.schema, values.rows);
    for (std::size_t c = 0; c < map.schema.size(); ++c) {
        const ColumnSchema& sc = map.schema[c];
        const ColumnSpan span = map.spans[c];
        for (std::size_t r = 0; r < values.rows; ++r) {
            switch (sc.kind) {
                case ColumnKind::Continuous: {
                    const double x = values(r, span.begin);
                    ds.columns[c][r] = x * (sc.max - sc.min) + sc.min;
                    break;
                }
                case ColumnKind::Ordinal: {
                    const auto k = static_cast<long long>(sc.categories.size());
                    long long rank =
                        std::llround(values(r, span.begin) * static_cast<double>(k - 1));
                    rank = std::clamp(rank, 0LL, k - 1);
                    ds.columns[c][r] = static_cast<double>(rank);
                    break;
                }
                case ColumnKind::Categorical: {
                    std::size_t best = 0;
                    for (std::size_t j = 1; j < span.width; ++j) {
                        if (values(r, span.begin + j) > values(r, span.begin + best)) {
                            best = j;
                        }
                    }
                    ds.columns[c][r] = static_cast<double>(best);
                    break;
                }
            }
        }
    }
    return ds;
}

SplitIndices split_indices(std::size_t n, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw config_error("split: ratio must lie strictly between 0 and 1");
    }
    if (n < 2) throw data_error("split: need at least 2 rows");

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(perm);

    const auto train_n = static_cast<std::size_t>(
        std::llround(ratio * static_cast<double>(n)));
    if (train_n == 0 || train_n >= n) {
        throw data_error("split: ratio " + std::to_string(ratio) + " on " +
                         std::to_string(n) + " rows leaves an empty part");
    }

    SplitIndices idx;
    idx.train_rows.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(train_n));
    idx.test_rows.assign(perm.begin() + static_cast<std::ptrdiff_t>(train_n), perm.end());
    std::sort(idx.train_rows.begin(), idx.train_rows.end());
    std::sort(idx.test_rows.begin(), idx.test_rows.end());
    return idx;
}

Split split(const Dataset& ds, double ratio, std::uint64_t seed) {
    Split s;
    s.indices = split_indices(ds.rows(), ratio, seed);
    s.train = select_rows(ds, s.indices.train_rows);
    s.test = select_rows(ds, s.indices.test_rows);
    s.ratio = ratio;
    s.seed = seed;
    return s;
}

Dataset select_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out(ds.schema, rows.size());
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.columns[c][i] = ds.columns[c][rows[i]];
            out.missing[c][i] = ds.missing[c][rows[i]];
        }
    }
    return out;
}

} // namespace daeimp
