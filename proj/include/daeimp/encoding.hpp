#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "daeimp/dataset.hpp"
#include "daeimp/matrix.hpp"
#include "daeimp/rng.hpp"

namespace daeimp {

// Contiguous run of encoded columns produced by one original column.
struct ColumnSpan {
    std::size_t begin = 0;
    std::size_t width = 0;
};

// Everything needed to map between a dataset and its numeric encoding:
// the schema (with the min/max learned at encode time) and the per-column
// spans, which partition the encoded columns.
struct EncodingMap {
    std::vector<ColumnSchema> schema;
    std::vector<ColumnSpan> spans;
    std::size_t encoded_cols = 0;
};

struct EncodedMatrix {
    Matrix values;
    Matrix mask; // same shape; 1.0 where the source cell was missing
    EncodingMap map;
};

// Numeric encoding of a dataset. Continuous columns are min-max scaled to
// [0,1] using observed cells only (a constant column encodes to 0.5);
// categorical columns become one-hot blocks; ordinal columns become
// rank/(K-1). Missing cells carry 0.0 and are flagged in the mask.
// Throws data_error for a column with no observed cells.
EncodedMatrix encode(const Dataset& ds);

// Encodes `ds` with a previously learned map: the map's scaling statistics
// and category order apply, nothing is re-learned and nothing is clamped, so
// continuous values outside the learned range land outside [0,1]. Categorical
// cells are matched by label text. Used to compare datasets in one common
// scaled space. For a constant learned range the deviation is kept linearly:
// x encodes to 0.5 + (x - min).
EncodedMatrix apply_encoding(const Dataset& ds, const EncodingMap& map);

// Fills masked cells with per-column baselines: observed mean for
// continuous/ordinal columns, one-hot of the modal observed label (ties to
// the lowest category index) for categorical blocks. Observed cells and the
// mask itself are untouched.
EncodedMatrix placeholder_fill(const EncodedMatrix& enc);

// Inverse of encode for arbitrary value matrices: continuous cells unscale,
// categorical blocks take the argmax (ties to the lowest index), ordinal
// cells round to the nearest rank and clamp. The result has no missing cells.
Dataset decode(const Matrix& values, const EncodingMap& map);

struct SplitIndices {
    std::vector<std::size_t> train_rows; // ascending original row indices
    std::vector<std::size_t> test_rows;
};

// Seed-deterministic partition: a random permutation's first
// round(ratio * n) rows become the training set. Indices are returned in
// ascending order, so row order within each part matches the source.
// Throws config_error for ratio outside (0,1), data_error when n < 2 or a
// part would be empty.
SplitIndices split_indices(std::size_t n, double ratio, std::uint64_t seed);

struct Split {
    Dataset train;
    Dataset test;
    SplitIndices indices;
    double ratio = 0.7;
    std::uint64_t seed = 0;
};

Split split(const Dataset& ds, double ratio, std::uint64_t seed);

// New dataset holding the given rows (in the given order) of `ds`.
Dataset select_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

} // namespace daeimp
