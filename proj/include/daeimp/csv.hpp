#pragma once

#include <string>
#include <vector>

#include "daeimp/dataset.hpp"

namespace daeimp {

struct CsvOptions {
    // Cell texts treated as missing. Defaults match the common "?" convention
    // plus empty fields.
    std::vector<std::string> missing_tokens{"?", ""};
};

// Loads an RFC-4180-style CSV (UTF-8, header row required, quoted fields may
// contain commas/quotes/newlines). Column types are inferred — a column whose
// observed cells all parse as finite numbers becomes Continuous, anything
// else Categorical with lexicographically sorted labels — unless `declared`
// supplies a schema entry of the same column name, which then wins. Declared
// categorical/ordinal entries with an empty category list get their labels
// inferred from the data. Continuous min/max are learned from observed cells.
//
// Throws io_error for unreadable/empty files and ragged rows, data_error for
// a non-numeric cell under a Continuous column or a label missing from a
// declared category list, config_error for a declared name not in the header.
Dataset load_csv(const std::string& path, const CsvOptions& opts = {},
                 const std::vector<ColumnSchema>* declared = nullptr);

// Writes the dataset back to CSV. Continuous cells use shortest
// round-trippable formatting; missing cells become `missing_token`. The write
// is atomic: a temporary file is renamed over the destination.
void save_csv(const std::string& path, const Dataset& ds,
              const std::string& missing_token = "?");

// Schema sidecar: a JSON array of {"name", "kind", "categories"} objects.
std::vector<ColumnSchema> load_schema_json(const std::string& path);
void save_schema_json(const std::string& path, const std::vector<ColumnSchema>& schema);

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Full-string finite-double parse; returns false on trailing junk, empty
// input, or a non-finite result.
bool parse_double(const std::string& text, double& out);

// Reads the whole file; throws io_error when unreadable.
std::string read_file(const std::string& path);

// Writes content to `path + ".tmp"` then renames it into place so readers
// never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace daeimp
