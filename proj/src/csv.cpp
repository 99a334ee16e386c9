#include "daeimp/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace daeimp {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    double value = 0.0;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) return false;
    if (!std::isfinite(value)) return false;
    out = value;
    return true;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw io_error("read failed on '" + path + "'");
    return buf.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw io_error("write failed on '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw io_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

namespace {

// Splits CSV text into records of fields. Quoted fields may contain commas,
// newlines, and doubled quotes. CRLF and LF both end records.
std::vector<std::vector<std::string>> parse_records(const std::string& text,
                                                    const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any_char = false; // current record has content (guards trailing newline)

    std::size_t i = 0;
    // Strip a UTF-8 byte-order mark.
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
        any_char = false;
    };

    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                quoted = true;
                any_char = true;
                break;
            case ',':
                end_field();
                any_char = true;
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field += c;
                any_char = true;
                break;
        }
    }
    if (quoted) throw io_error("unterminated quoted field in '" + path + "'");
    if (any_char || !record.empty() || !field.empty()) end_record();
    return records;
}

bool is_missing_token(const std::string& cell, const CsvOptions& opts) {
    return std::find(opts.missing_tokens.begin(), opts.missing_tokens.end(), cell) !=
           opts.missing_tokens.end();
}

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote_field(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvOptions& opts,
                 const std::vector<ColumnSchema>* declared) {
    const std::string text = read_file(path);
    const auto records = parse_records(text, path);
    if (records.empty()) throw io_error("'" + path + "' is empty (missing header row)");

    const std::vector<std::string>& header = records.front();
    const std::size_t cols = header.size();
    const std::size_t rows = records.size() - 1;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != cols) {
            throw io_error("'" + path + "' row " + std::to_string(r + 1) + " has " +
                           std::to_string(records[r].size()) + " fields, expected " +
                           std::to_string(cols));
        }
    }

    // Map declared schema entries onto header columns by name.
    std::vector<const ColumnSchema*> decl(cols, nullptr);
    if (declared) {
        for (const ColumnSchema& sc : *declared) {
            auto it = std::find(header.begin(), header.end(), sc.name);
            if (it == header.end()) {
                throw config_error("declared column '" + sc.name +
                                   "' not found in '" + path + "' header");
            }
            decl[static_cast<std::size_t>(it - header.begin())] = &sc;
        }
    }

    std::vector<ColumnSchema> schema(cols);
    Dataset ds;
    ds.schema.resize(cols);
    ds.columns.assign(cols, std::vector<double>(rows, 0.0));
    ds.missing.assign(cols, std::vector<std::uint8_t>(rows, 0));

    for (std::size_t c = 0; c < cols; ++c) {
        ColumnSchema sc;
        sc.name = header[c];

        // Decide the column kind.
        bool kind_fixed = false;
        if (decl[c]) {
            sc.kind = decl[c]->kind;
            sc.categories = decl[c]->categories;
            kind_fixed = true;
        }
        if (!kind_fixed) {
            sc.kind = ColumnKind::Continuous;
            double tmp;
            for (std::size_t r = 0; r < rows; ++r) {
                const std::string& cell = records[r + 1][c];
                if (is_missing_token(cell, opts)) continue;
                if (!parse_double(cell, tmp)) {
                    sc.kind = ColumnKind::Categorical;
                    break;
                }
            }
        }

        if (sc.kind == ColumnKind::Continuous) {
            bool seen = false;
            double lo = 0.0, hi = 0.0;
            for (std::size_t r = 0; r < rows; ++r) {
                const std::string& cell = records[r + 1][c];
                if (is_missing_token(cell, opts)) {
                    ds.missing[c][r] = 1;
                    continue;
                }
                double v;
                if (!parse_double(cell, v)) {
                    throw data_error("'" + path + "' column '" + sc.name + "' row " +
                                     std::to_string(r + 2) + ": '" + cell +
                                     "' is not a finite number");
                }
                ds.columns[c][r] = v;
                if (!seen) {
                    lo = hi = v;
                    seen = true;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
            sc.min = lo;
            sc.max = hi;
        } else {
            // Categorical or ordinal. Infer labels when none were declared.
            if (sc.categories.empty()) {
                std::set<std::string> labels;
                for (std::size_t r = 0; r < rows; ++r) {
                    const std::string& cell = records[r + 1][c];
                    if (!is_missing_token(cell, opts)) labels.insert(cell);
                }
                sc.categories.assign(labels.begin(), labels.end());
            }
            std::map<std::string, std::size_t> index;
            for (std::size_t k = 0; k < sc.categories.size(); ++k) {
                if (!index.emplace(sc.categories[k], k).second) {
                    throw config_error("column '" + sc.name +
                                       "' declares duplicate category '" +
                                       sc.categories[k] + "'");
                }
            }
            for (std::size_t r = 0; r < rows; ++r) {
                const std::string& cell = records[r + 1][c];
                if (is_missing_token(cell, opts)) {
                    ds.missing[c][r] = 1;
                    continue;
                }
                auto it = index.find(cell);
                if (it == index.end()) {
                    throw data_error("'" + path + "' column '" + sc.name + "' row " +
                                     std::to_string(r + 2) + ": label '" + cell +
                                     "' is not in the declared category list");
                }
                ds.columns[c][r] = static_cast<double>(it->second);
            }
        }
        ds.schema[c] = std::move(sc);
    }
    return ds;
}

void save_csv(const std::string& path, const Dataset& ds,
              const std::string& missing_token) {
    std::string out;
    for (std::size_t c = 0; c < ds.cols(); ++c) {
        if (c) out += ',';
        out += quote_field(ds.schema[c].name);
    }
    out += '\n';
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < ds.cols(); ++c) {
            if (c) out += ',';
            out += quote_field(cell_text(ds, r, c, missing_token));
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<ColumnSchema> load_schema_json(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw config_error("schema file '" + path + "': " + e.what());
    }
    if (!doc.is_array()) {
        throw config_error("schema file '" + path + "' must be a JSON array");
    }
    std::vector<ColumnSchema> schema;
    for (const auto& entry : doc) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("kind")) {
            throw config_error("schema file '" + path +
                               "': every entry needs \"name\" and \"kind\"");
        }
        ColumnSchema sc;
        sc.name = entry.at("name").get<std::string>();
        sc.kind = column_kind_from_string(entry.at("kind").get<std::string>());
        if (entry.contains("categories")) {
            sc.categories = entry.at("categories").get<std::vector<std::string>>();
        }
        schema.push_back(std::move(sc));
    }
    return schema;
}

void save_schema_json(const std::string& path, const std::vector<ColumnSchema>& schema) {
    nlohmann::json doc = nlohmann::json::array();
    for (const ColumnSchema& sc : schema) {
        nlohmann::json entry;
        entry["name"] = sc.name;
        entry["kind"] = to_string(sc.kind);
        if (sc.kind != ColumnKind::Continuous) entry["categories"] = sc.categories;
        doc.push_back(std::move(entry));
    }
    write_file_atomic(path, doc.dump(2) + "\n");
}

} // namespace daeimp
