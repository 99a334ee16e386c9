#include "daeimp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace daeimp {

const char* to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Continuous: return "continuous";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Ordinal: return "ordinal";
    }
    return "unknown";
}

ColumnKind column_kind_from_string(const std::string& text) {
    if (text == "continuous") return ColumnKind::Continuous;
    if (text == "categorical") return ColumnKind::Categorical;
    if (text == "ordinal") return ColumnKind::Ordinal;
    throw config_error("unknown column kind '" + text + "'");
}

Dataset::Dataset(std::vector<ColumnSchema> s, std::size_t rows) : schema(std::move(s)) {
    columns.assign(schema.size(), std::vector<double>(rows, 0.0));
    missing.assign(schema.size(), std::vector<std::uint8_t>(rows, 0));
}

std::size_t Dataset::missing_count() const {
    std::size_t n = 0;
    for (const auto& col : missing) {
        for (std::uint8_t m : col) n += m != 0;
    }
    return n;
}

void Dataset::validate() const {
    if (columns.size() != schema.size() || missing.size() != schema.size()) {
        throw data_error("dataset: column count disagrees with schema");
    }
    const std::size_t n = rows();
    for (std::size_t c = 0; c < schema.size(); ++c) {
        if (columns[c].size() != n || missing[c].size() != n) {
            throw data_error("dataset: ragged column '" + schema[c].name + "'");
        }
        const ColumnSchema& sc = schema[c];
        if (sc.kind == ColumnKind::Continuous) {
            if (sc.min > sc.max) {
                throw data_error("dataset: column '" + sc.name + "' has min > max");
            }
            continue;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (missing[c][r]) continue;
            const double v = columns[c][r];
            if (v < 0.0 || v != std::floor(v) ||
                static_cast<std::size_t>(v) >= sc.categories.size()) {
                throw data_error("dataset: column '" + sc.name +
                                 "' holds an out-of-range category index");
            }
        }
    }
}

std::string cell_text(const Dataset& ds, std::size_t row, std::size_t col,
                      const std::string& missing_token) {
    if (ds.is_missing(row, col)) return missing_token;
    const ColumnSchema& sc = ds.schema[col];
    const double v = ds.value(row, col);
    if (sc.kind == ColumnKind::Continuous) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }
    return sc.categories[static_cast<std::size_t>(v)];
}

} // namespace daeimp
