#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "daeimp/errors.hpp"

namespace daeimp {

enum class ColumnKind { Continuous, Categorical, Ordinal };

const char* to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& text);

// Per-column description. `categories` is the ordered label list for
// categorical/ordinal columns; `min`/`max` are the observed value range for
// continuous columns (filled at load, re-learned at encode time).
struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Continuous;
    std::vector<std::string> categories;
    double min = 0.0;
    double max = 0.0;
};

// Columnar typed table with a missingness mask. Continuous cells hold the
// parsed value; categorical/ordinal cells hold the category index (stored as
// a double, exact for any realistic category count). A cell flagged missing
// holds 0.0 and must never be read as data.
//
// Columns with no observed cells may carry an empty category list / unset
// min-max; encode() rejects them, everything else tolerates them.
struct Dataset {
    std::vector<ColumnSchema> schema;
    std::vector<std::vector<double>> columns;       // [col][row]
    std::vector<std::vector<std::uint8_t>> missing; // [col][row], 1 = missing

    Dataset() = default;
    Dataset(std::vector<ColumnSchema> s, std::size_t rows);

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    std::size_t cols() const { return schema.size(); }

    double value(std::size_t row, std::size_t col) const { return columns[col][row]; }
    bool is_missing(std::size_t row, std::size_t col) const {
        return missing[col][row] != 0;
    }
    void set_value(std::size_t row, std::size_t col, double v) {
        columns[col][row] = v;
        missing[col][row] = 0;
    }
    void set_missing(std::size_t row, std::size_t col) {
        columns[col][row] = 0.0;
        missing[col][row] = 1;
    }

    std::size_t missing_count() const;

    // Throws data_error when dimensions disagree, a category index is out of
    // range, or a continuous range has min > max.
    void validate() const;
};

// The label (or numeric text) of one cell, for display and CSV output.
// Missing cells render as `missing_token`.
std::string cell_text(const Dataset& ds, std::size_t row, std::size_t col,
                      const std::string& missing_token = "?");

} // namespace daeimp
