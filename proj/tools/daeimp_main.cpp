// daeimp: batch imputation toolkit.
//
// Subcommands:
//   induce               mask cells of a complete CSV (mcar/mnar x uniform/random)
//   impute               produce k completions of a masked CSV (dae/meanmode/cepmm)
//   score                per-attribute-RMSE-sum of completions against the truth
//   evaluate-downstream  repeated-CV k-NN score of completions
//   bench                run a datasets x specs x methods grid from a JSON config
//
// All outputs are written atomically (temp file + rename); every run is
// deterministic given its seed, and manifests record enough to reproduce it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "daeimp/baselines.hpp"
#include "daeimp/csv.hpp"
#include "daeimp/dataset.hpp"
#include "daeimp/downstream.hpp"
#include "daeimp/encoding.hpp"
#include "daeimp/errors.hpp"
#include "daeimp/metrics.hpp"
#include "daeimp/mi.hpp"
#include "daeimp/missingness.hpp"

namespace {

using daeimp::ColumnSchema;
using daeimp::Dataset;
using json = nlohmann::ordered_json;

constexpr const char* kToolName = "daeimp";
constexpr const char* kToolVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string file_digest(const std::string& path) {
    return "fnv1a64:" + hex64(fnv1a64(daeimp::read_file(path)));
}

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// "path/to/file.csv" -> "path/to/file"
std::string strip_extension(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path;
    }
    return path.substr(0, dot);
}

json tool_header(const std::string& subcommand) {
    json j;
    j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    j["subcommand"] = subcommand;
    return j;
}

void write_json(const std::string& path, const json& doc) {
    daeimp::write_file_atomic(path, doc.dump(2) + "\n");
}

json load_json(const std::string& path) {
    try {
        return json::parse(daeimp::read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw daeimp::config_error("'" + path + "': " + e.what());
    }
}

json schema_to_json(const std::vector<ColumnSchema>& schema) {
    json arr = json::array();
    for (const ColumnSchema& sc : schema) {
        json entry;
        entry["name"] = sc.name;
        entry["kind"] = daeimp::to_string(sc.kind);
        if (sc.kind != daeimp::ColumnKind::Continuous) {
            entry["categories"] = sc.categories;
        }
        arr.push_back(std::move(entry));
    }
    return arr;
}

std::vector<ColumnSchema> schema_from_json(const json& arr, const std::string& where) {
    if (!arr.is_array()) {
        throw daeimp::config_error(where + ": schema must be a JSON array");
    }
    std::vector<ColumnSchema> schema;
    for (const auto& entry : arr) {
        ColumnSchema sc;
        sc.name = entry.at("name").get<std::string>();
        sc.kind = daeimp::column_kind_from_string(entry.at("kind").get<std::string>());
        if (entry.contains("categories")) {
            sc.categories = entry.at("categories").get<std::vector<std::string>>();
        }
        schema.push_back(std::move(sc));
    }
    return schema;
}

// Shared CSV input flags.
struct CsvFlags {
    std::vector<std::string> missing_tokens;
    std::string schema_path;

    daeimp::CsvOptions options() const {
        daeimp::CsvOptions opts;
        if (!missing_tokens.empty()) opts.missing_tokens = missing_tokens;
        return opts;
    }
};

void add_csv_flags(CLI::App* cmd, CsvFlags& flags) {
    cmd->add_option("--missing-token", flags.missing_tokens,
                    "Cell text treated as missing (repeatable; default \"?\" and \"\")");
    cmd->add_option("--schema", flags.schema_path,
                    "Schema sidecar JSON ({name,kind,categories} per column)");
}

Dataset load_input(const std::string& path, const CsvFlags& flags) {
    if (flags.schema_path.empty()) {
        return daeimp::load_csv(path, flags.options());
    }
    const std::vector<ColumnSchema> declared = daeimp::load_schema_json(flags.schema_path);
    return daeimp::load_csv(path, flags.options(), &declared);
}

std::size_t default_workers() {
    if (const char* env = std::getenv("DAEIMP_WORKERS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    return 1;
}

// ---------------------------------------------------------------------------
// induce

struct InduceArgs {
    std::string input;
    std::string out_prefix;
    std::string mechanism = "mcar";
    std::string pattern = "uniform";
    double t = 0.2;
    std::uint64_t seed = 0;
    CsvFlags csv;
};

json mask_to_json(const std::vector<std::vector<std::uint8_t>>& mask) {
    json cols = json::array();
    for (const auto& col : mask) {
        json rows = json::array();
        for (std::size_t r = 0; r < col.size(); ++r) {
            if (col[r]) rows.push_back(r);
        }
        cols.push_back(std::move(rows));
    }
    return cols;
}

int cmd_induce(const InduceArgs& args) {
    const Dataset ds = load_input(args.input, args.csv);

    daeimp::MissingnessSpec spec;
    spec.mechanism = daeimp::mechanism_from_string(args.mechanism);
    spec.pattern = daeimp::pattern_from_string(args.pattern);
    spec.t = args.t;
    spec.seed = args.seed;

    const daeimp::InducedDataset ind = daeimp::induce(ds, spec);
    const daeimp::MissingnessStats stats = daeimp::achieved_stats(ind);

    const std::string prefix =
        args.out_prefix.empty() ? strip_extension(args.input) : args.out_prefix;
    const std::string masked_path = prefix + ".masked.csv";
    const std::string truth_path = prefix + ".truth.csv";
    const std::string prov_path = prefix + ".provenance.json";

    daeimp::save_csv(masked_path, ind.observed);
    daeimp::save_csv(truth_path, ind.truth);

    // No timestamps here: reruns with the same inputs must be byte-identical.
    json prov = tool_header("induce");
    prov["input"] = {{"path", args.input},
                     {"digest", file_digest(args.input)},
                     {"rows", ds.rows()},
                     {"cols", ds.cols()}};
    prov["spec"] = {{"mechanism", args.mechanism},
                    {"pattern", args.pattern},
                    {"t", spec.t},
                    {"seed", spec.seed}};
    prov["achieved"] = {{"proportion", ind.achieved_proportion},
                        {"rows_masked", stats.rows_masked},
                        {"row_condition_hit_rate", stats.row_condition_hit_rate},
                        {"column_fractions", stats.column_fractions}};
    if (!ind.driver_columns.empty()) {
        prov["drivers"] = {
            {"columns",
             json::array({ds.schema[ind.driver_columns[0]].name,
                          ds.schema[ind.driver_columns[1]].name})},
            {"column_indices", ind.driver_columns},
            {"medians", ind.driver_medians}};
    }
    if (!ind.masked_attributes.empty()) {
        json names = json::array();
        for (std::size_t c : ind.masked_attributes) names.push_back(ds.schema[c].name);
        prov["masked_attributes"] = {{"names", names}, {"indices", ind.masked_attributes}};
    }
    prov["schema"] = schema_to_json(ds.schema);
    prov["masked_rows_by_column"] = mask_to_json(ind.induced_mask);
    prov["outputs"] = {{"masked", masked_path}, {"truth", truth_path}};
    write_json(prov_path, prov);

    std::printf("induced %zu of %zu cells (%.4f) -> %s\n",
                ind.observed.missing_count(), ds.rows() * ds.cols(),
                ind.achieved_proportion, masked_path.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// impute

struct ImputeArgs {
    std::string input;
    std::string out_prefix;
    std::string method = "dae";
    std::size_t k = 5;
    std::uint64_t seed = 0;
    // dae
    std::size_t theta = 7;
    std::size_t depth = 3;
    std::size_t epochs = 500;
    double dropout = 0.5;
    double lr = 0.01;
    double momentum = 0.9;
    double decay = 0.99;
    std::size_t batch = 0;
    double target_mse = 1e-6;
    std::size_t sma_window = 5;
    double split_ratio = 0.7;
    // cepmm
    std::size_t iterations = 10;
    std::size_t donors = 5;
    bool random_sweep = false;
    std::size_t workers = 1;
    CsvFlags csv;
};

daeimp::MIConfig mi_config(const ImputeArgs& args) {
    daeimp::MIConfig cfg;
    cfg.k = args.k;
    cfg.theta = args.theta;
    cfg.encoder_depth = args.depth;
    cfg.split_ratio = args.split_ratio;
    cfg.master_seed = args.seed;
    cfg.workers = args.workers;
    cfg.train.epochs = args.epochs;
    cfg.train.input_dropout = args.dropout;
    cfg.train.base_learning_rate = args.lr;
    cfg.train.momentum = args.momentum;
    cfg.train.lr_decay = args.decay;
    cfg.train.batch_size = args.batch;
    cfg.train.target_mse = args.target_mse;
    cfg.train.sma_window = args.sma_window;
    return cfg;
}

json impute_config_json(const ImputeArgs& args) {
    json cfg;
    cfg["method"] = args.method;
    cfg["k"] = args.k;
    cfg["master_seed"] = args.seed;
    if (args.method == "dae") {
        cfg["theta"] = args.theta;
        cfg["encoder_depth"] = args.depth;
        cfg["epochs"] = args.epochs;
        cfg["input_dropout"] = args.dropout;
        cfg["base_learning_rate"] = args.lr;
        cfg["momentum"] = args.momentum;
        cfg["lr_decay"] = args.decay;
        cfg["batch_size"] = args.batch;
        cfg["target_mse"] = args.target_mse;
        cfg["sma_window"] = args.sma_window;
        cfg["split_ratio"] = args.split_ratio;
        cfg["workers"] = args.workers;
    } else if (args.method == "cepmm") {
        cfg["iterations"] = args.iterations;
        cfg["donors"] = args.donors;
        cfg["random_sweep_order"] = args.random_sweep;
        cfg["workers"] = args.workers;
    }
    return cfg;
}

// Imputation outcome shared by the direct CLI path and the bench driver.
struct ImputeOutcome {
    std::vector<std::string> completion_paths;
    std::string manifest_path;
    std::vector<std::vector<double>> per_run_loss_tail; // dae only, last epoch loss
};

ImputeOutcome run_impute(const Dataset& masked, const ImputeArgs& args,
                         const std::string& prefix) {
    const std::string started = utc_timestamp();

    daeimp::MIResult result;
    if (args.method == "dae") {
        result = daeimp::multiple_impute(masked, mi_config(args));
    } else if (args.method == "meanmode") {
        // Deterministic single imputer: the k completions are identical by
        // construction (documented in the manifest).
        const Dataset completed = daeimp::mean_mode_impute(masked);
        result.completions.assign(args.k, completed);
        result.runs.resize(args.k);
    } else if (args.method == "cepmm") {
        daeimp::ChainedConfig cfg;
        cfg.iterations = args.iterations;
        cfg.donors = args.donors;
        cfg.k = args.k;
        cfg.seed = args.seed;
        cfg.random_sweep_order = args.random_sweep;
        cfg.workers = args.workers;
        result = daeimp::chained_pmm_impute(masked, cfg);
    } else {
        throw daeimp::config_error("unknown method '" + args.method +
                                   "' (expected dae, meanmode, or cepmm)");
    }

    ImputeOutcome outcome;
    std::vector<std::string> written;
    try {
        for (std::size_t i = 0; i < result.completions.size(); ++i) {
            const std::string path = prefix + ".imp" + std::to_string(i + 1) + ".csv";
            daeimp::save_csv(path, result.completions[i]);
            written.push_back(path);
            outcome.completion_paths.push_back(path);
        }

        json manifest = tool_header("impute");
        manifest["timestamps"] = {{"started", started}, {"finished", utc_timestamp()}};
        manifest["input"] = {{"path", args.input},
                             {"digest", file_digest(args.input)},
                             {"rows", masked.rows()},
                             {"cols", masked.cols()},
                             {"missing_cells", masked.missing_count()}};
        manifest["config"] = impute_config_json(args);
        if (args.method == "meanmode") {
            manifest["note"] =
                "meanmode is deterministic; all completions are identical";
        }
        if (args.method == "dae") {
            manifest["split"] = {{"ratio", args.split_ratio},
                                 {"seed", args.seed},
                                 {"train_rows", result.split.train_rows},
                                 {"test_rows", result.split.test_rows}};
        }
        json runs = json::array();
        for (std::size_t i = 0; i < result.runs.size(); ++i) {
            json run;
            run["index"] = i + 1;
            if (args.method != "meanmode") {
                run["seed"] = result.runs[i].seed;
            }
            if (args.method == "dae") {
                run["train_stream_seed"] =
                    daeimp::train_stream_seed(result.runs[i].seed);
                run["stop_reason"] = daeimp::to_string(result.runs[i].history.stop_reason);
                run["epochs_run"] = result.runs[i].history.epochs_run;
                if (!result.runs[i].history.epoch_loss.empty()) {
                    run["final_loss"] = result.runs[i].history.epoch_loss.back();
                }
            }
            runs.push_back(std::move(run));
        }
        manifest["runs"] = std::move(runs);
        json outputs = json::array();
        for (const std::string& path : outcome.completion_paths) {
            outputs.push_back({{"path", path}, {"digest", file_digest(path)}});
        }
        manifest["outputs"] = std::move(outputs);

        outcome.manifest_path = prefix + ".manifest.json";
        write_json(outcome.manifest_path, manifest);
        written.push_back(outcome.manifest_path);
    } catch (...) {
        for (const std::string& path : written) std::remove(path.c_str());
        throw;
    }
    return outcome;
}

int cmd_impute(const ImputeArgs& args) {
    const Dataset masked = load_input(args.input, args.csv);
    const std::string prefix =
        args.out_prefix.empty() ? strip_extension(args.input) : args.out_prefix;
    const ImputeOutcome outcome = run_impute(masked, args, prefix);
    std::printf("wrote %zu completions + %s\n", outcome.completion_paths.size(),
                outcome.manifest_path.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreArgs {
    std::vector<std::string> completions;
    std::string truth_path;
    std::string provenance_path;
    std::string masked_path;
    std::string manifest_path;
    std::string compare_path;
    std::string scope = "all";
    std::string method = "model";
    std::string out_prefix;
    CsvFlags csv;
};

// Expands a typed-space mask into encoded space via the map's spans.
daeimp::Matrix encoded_scoring_mask(const std::vector<std::vector<std::uint8_t>>& mask,
                                    const daeimp::EncodingMap& map, std::size_t rows) {
    daeimp::Matrix out(rows, map.encoded_cols);
    for (std::size_t c = 0; c < mask.size(); ++c) {
        const daeimp::ColumnSpan span = map.spans[c];
        for (std::size_t r = 0; r < rows; ++r) {
            if (!mask[c][r]) continue;
            for (std::size_t j = 0; j < span.width; ++j) out(r, span.begin + j) = 1.0;
        }
    }
    return out;
}

struct ScoreInputs {
    Dataset truth;
    std::vector<std::vector<std::uint8_t>> induced_mask; // [col][row]
};

ScoreInputs load_score_inputs(const ScoreArgs& args) {
    ScoreInputs in;
    std::vector<ColumnSchema> declared;
    bool have_declared = false;

    if (!args.provenance_path.empty()) {
        const json prov = load_json(args.provenance_path);
        if (prov.contains("schema")) {
            declared = schema_from_json(prov.at("schema"), args.provenance_path);
            have_declared = true;
        }
        in.truth = daeimp::load_csv(args.truth_path, args.csv.options(),
                                    have_declared ? &declared : nullptr);
        const json& cols = prov.at("masked_rows_by_column");
        if (cols.size() != in.truth.cols()) {
            throw daeimp::data_error("provenance mask covers " +
                                     std::to_string(cols.size()) +
                                     " columns, truth has " +
                                     std::to_string(in.truth.cols()));
        }
        in.induced_mask.assign(in.truth.cols(),
                               std::vector<std::uint8_t>(in.truth.rows(), 0));
        for (std::size_t c = 0; c < cols.size(); ++c) {
            for (const auto& r : cols[c]) {
                const std::size_t row = r.get<std::size_t>();
                if (row >= in.truth.rows()) {
                    throw daeimp::data_error("provenance mask row " +
                                             std::to_string(row) +
                                             " is outside the truth dataset");
                }
                in.induced_mask[c][row] = 1;
            }
        }
        return in;
    }

    if (args.masked_path.empty()) {
        throw daeimp::config_error("score needs --provenance or --masked for the mask");
    }
    if (!args.csv.schema_path.empty()) {
        declared = daeimp::load_schema_json(args.csv.schema_path);
        have_declared = true;
    }
    in.truth = daeimp::load_csv(args.truth_path, args.csv.options(),
                                have_declared ? &declared : nullptr);
    const Dataset masked = daeimp::load_csv(args.masked_path, args.csv.options(),
                                            &in.truth.schema);
    if (masked.rows() != in.truth.rows() || masked.cols() != in.truth.cols()) {
        throw daeimp::data_error("masked and truth datasets have different shapes");
    }
    in.induced_mask = masked.missing;
    return in;
}

int cmd_score(const ScoreArgs& args) {
    const ScoreInputs inputs = load_score_inputs(args);
    const Dataset& truth = inputs.truth;
    if (truth.missing_count() != 0) {
        throw daeimp::data_error("truth dataset has missing cells; it must be complete");
    }

    const daeimp::ScoreScope scope = args.scope == "test"
                                         ? daeimp::ScoreScope::TestMissing
                                         : daeimp::ScoreScope::AllMissing;

    const daeimp::EncodedMatrix enc_truth = daeimp::encode(truth);
    daeimp::Matrix mask =
        encoded_scoring_mask(inputs.induced_mask, enc_truth.map, truth.rows());

    if (scope == daeimp::ScoreScope::TestMissing) {
        if (args.manifest_path.empty()) {
            throw daeimp::config_error("--scope test needs --manifest for the split");
        }
        const json manifest = load_json(args.manifest_path);
        if (!manifest.contains("split")) {
            throw daeimp::config_error("'" + args.manifest_path +
                                       "' records no split (not a dae manifest?)");
        }
        std::vector<std::uint8_t> in_test(truth.rows(), 0);
        for (const auto& r : manifest.at("split").at("test_rows")) {
            const std::size_t row = r.get<std::size_t>();
            if (row < truth.rows()) in_test[row] = 1;
        }
        for (std::size_t r = 0; r < mask.rows; ++r) {
            if (in_test[r]) continue;
            for (std::size_t c = 0; c < mask.cols; ++c) mask(r, c) = 0.0;
        }
    }

    std::vector<double> per_imputation;
    json completions = json::array();
    std::size_t cells_scored = 0;
    for (const std::string& path : args.completions) {
        const Dataset comp = daeimp::load_csv(path, args.csv.options(), &truth.schema);
        if (comp.rows() != truth.rows()) {
            throw daeimp::data_error("'" + path + "' has " + std::to_string(comp.rows()) +
                                     " rows, truth has " + std::to_string(truth.rows()));
        }
        if (comp.missing_count() != 0) {
            throw daeimp::data_error("'" + path + "' still has missing cells");
        }
        const daeimp::EncodedMatrix enc_comp = daeimp::apply_encoding(comp, enc_truth.map);
        const daeimp::ScoreReport report =
            daeimp::rmse_sum(enc_comp.values, enc_truth.values, mask, enc_truth.map, scope);
        per_imputation.push_back(report.rmse_sum);
        cells_scored = report.cells_scored;
        completions.push_back({{"path", path},
                               {"digest", file_digest(path)},
                               {"rmse_sum", report.rmse_sum},
                               {"per_attribute_rmse", report.per_attribute_rmse}});
    }

    const daeimp::PooledStat pooled = daeimp::pool(per_imputation);

    json report = tool_header("score");
    report["timestamps"] = {{"finished", utc_timestamp()}};
    report["method"] = args.method;
    report["scope"] = daeimp::to_string(scope);
    report["truth"] = {{"path", args.truth_path}, {"digest", file_digest(args.truth_path)}};
    report["cells_scored"] = cells_scored;
    report["completions"] = std::move(completions);
    report["pooled"] = {{"mean", pooled.mean}, {"min", pooled.min}, {"max", pooled.max}};

    if (!args.compare_path.empty()) {
        const json other = load_json(args.compare_path);
        std::vector<double> reference;
        for (const auto& comp : other.at("completions")) {
            reference.push_back(comp.at("rmse_sum").get<double>());
        }
        const double ratio = daeimp::error_ratio(per_imputation, reference);
        report["compare"] = {{"path", args.compare_path},
                             {"method", other.value("method", std::string("reference"))},
                             {"reference_mean", daeimp::pool(reference).mean},
                             {"error_ratio", ratio}};
    }

    const std::string prefix = args.out_prefix.empty()
                                   ? strip_extension(args.completions.front())
                                   : args.out_prefix;
    write_json(prefix + ".score.json", report);

    std::string csv = "imputation,rmse_sum\n";
    for (std::size_t i = 0; i < per_imputation.size(); ++i) {
        csv += "imp" + std::to_string(i + 1) + "," +
               daeimp::format_double(per_imputation[i]) + "\n";
    }
    csv += "pooled_mean," + daeimp::format_double(pooled.mean) + "\n";
    daeimp::write_file_atomic(prefix + ".score.csv", csv);

    std::printf("%s rmse_sum mean %.6f (min %.6f, max %.6f) over %zu completions\n",
                args.method.c_str(), pooled.mean, pooled.min, pooled.max,
                per_imputation.size());
    return 0;
}

// ---------------------------------------------------------------------------
// evaluate-downstream

struct EvalArgs {
    std::vector<std::string> completions;
    std::string truth_path;
    std::string target;
    std::string task = "auto";
    std::size_t folds = 5;
    std::size_t repeats = 5;
    std::size_t knn = 5;
    std::uint64_t seed = 0;
    std::string method = "model";
    std::string out_prefix;
    CsvFlags csv;
};

int cmd_evaluate(const EvalArgs& args) {
    daeimp::EvalConfig cfg;
    cfg.target_column = args.target;
    cfg.folds = args.folds;
    cfg.repeats = args.repeats;
    cfg.knn_k = args.knn;
    cfg.seed = args.seed;
    if (args.task == "classification") cfg.task = daeimp::TaskKind::Classification;
    else if (args.task == "regression") cfg.task = daeimp::TaskKind::Regression;
    else if (args.task != "auto") {
        throw daeimp::config_error("unknown task '" + args.task +
                                   "' (expected auto, classification, or regression)");
    }

    std::vector<ColumnSchema> declared;
    const std::vector<ColumnSchema>* declared_ptr = nullptr;
    if (!args.csv.schema_path.empty()) {
        declared = daeimp::load_schema_json(args.csv.schema_path);
        declared_ptr = &declared;
    }

    json rows = json::array();
    std::string csv = "method,completion,task,score\n";
    daeimp::TaskKind task = daeimp::TaskKind::Classification;

    std::vector<double> per_completion;
    for (const std::string& path : args.completions) {
        const Dataset comp = daeimp::load_csv(path, args.csv.options(), declared_ptr);
        const daeimp::CvReport report = daeimp::cross_validate(comp, cfg);
        task = report.task;
        per_completion.push_back(report.mean_score);
        rows.push_back({{"path", path},
                        {"score", report.mean_score},
                        {"degenerate_target", report.degenerate_target}});
        csv += args.method + "," + path + "," + daeimp::to_string(report.task) + "," +
               daeimp::format_double(report.mean_score) + "\n";
    }
    const daeimp::PooledStat pooled = daeimp::pool(per_completion);

    json report = tool_header("evaluate-downstream");
    report["timestamps"] = {{"finished", utc_timestamp()}};
    report["method"] = args.method;
    report["config"] = {{"target", args.target},   {"task", daeimp::to_string(task)},
                        {"folds", args.folds},     {"repeats", args.repeats},
                        {"neighbors", args.knn},   {"seed", args.seed}};
    report["completions"] = std::move(rows);
    report["pooled"] = {{"mean", pooled.mean}, {"min", pooled.min}, {"max", pooled.max}};

    if (!args.truth_path.empty()) {
        const Dataset truth = daeimp::load_csv(args.truth_path, args.csv.options(),
                                               declared_ptr);
        const daeimp::CvReport truth_report = daeimp::cross_validate(truth, cfg);
        report["truth"] = {{"path", args.truth_path}, {"score", truth_report.mean_score}};
        csv += "truth," + args.truth_path + "," + daeimp::to_string(truth_report.task) +
               "," + daeimp::format_double(truth_report.mean_score) + "\n";
    }

    const std::string prefix = args.out_prefix.empty()
                                   ? strip_extension(args.completions.front())
                                   : args.out_prefix;
    write_json(prefix + ".downstream.json", report);
    daeimp::write_file_atomic(prefix + ".downstream.csv", csv);

    std::printf("%s downstream %s mean %.6f over %zu completions\n", args.method.c_str(),
                daeimp::to_string(task), pooled.mean, per_completion.size());
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string config_path;
    std::string out_dir;
    std::size_t workers = 1;
};

struct BenchDataset {
    std::string name;
    std::string path;
    std::string schema_path;
    std::string target;  // empty = no downstream evaluation
    std::string task = "auto";
};

bool file_exists(const std::string& path) {
    std::ifstream f(path);
    return f.good();
}

int cmd_bench(const BenchArgs& args) {
    const json cfg = load_json(args.config_path);
    if (!cfg.contains("master_seed")) {
        throw daeimp::config_error("bench config needs an explicit \"master_seed\"");
    }
    const std::uint64_t master_seed = cfg.at("master_seed").get<std::uint64_t>();

    std::vector<BenchDataset> datasets;
    for (const auto& d : cfg.at("datasets")) {
        BenchDataset ds;
        ds.name = d.at("name").get<std::string>();
        ds.path = d.at("path").get<std::string>();
        ds.schema_path = d.value("schema", std::string());
        ds.target = d.value("target", std::string());
        ds.task = d.value("task", std::string("auto"));
        datasets.push_back(std::move(ds));
    }
    const auto mechanisms = cfg.value("mechanisms", std::vector<std::string>{"mcar"});
    const auto patterns = cfg.value("patterns", std::vector<std::string>{"uniform"});
    const auto proportions = cfg.value("proportions", std::vector<double>{0.2});
    const auto methods =
        cfg.value("methods", std::vector<std::string>{"dae", "meanmode"});
    const std::size_t k = cfg.value("k", std::size_t{5});
    const std::string reference = cfg.value("reference_method", std::string("meanmode"));

    ImputeArgs base;
    base.k = k;
    base.workers = args.workers;
    if (cfg.contains("dae")) {
        const json& d = cfg.at("dae");
        base.theta = d.value("theta", base.theta);
        base.depth = d.value("encoder_depth", base.depth);
        base.epochs = d.value("epochs", base.epochs);
        base.dropout = d.value("input_dropout", base.dropout);
        base.lr = d.value("base_learning_rate", base.lr);
        base.momentum = d.value("momentum", base.momentum);
        base.decay = d.value("lr_decay", base.decay);
        base.batch = d.value("batch_size", base.batch);
        base.target_mse = d.value("target_mse", base.target_mse);
        base.sma_window = d.value("sma_window", base.sma_window);
        base.split_ratio = d.value("split_ratio", base.split_ratio);
    }
    if (cfg.contains("cepmm")) {
        const json& c = cfg.at("cepmm");
        base.iterations = c.value("iterations", base.iterations);
        base.donors = c.value("donors", base.donors);
        base.random_sweep = c.value("random_sweep_order", base.random_sweep);
    }
    daeimp::EvalConfig eval_base;
    if (cfg.contains("downstream")) {
        const json& e = cfg.at("downstream");
        eval_base.folds = e.value("folds", eval_base.folds);
        eval_base.repeats = e.value("repeats", eval_base.repeats);
        eval_base.knn_k = e.value("neighbors", eval_base.knn_k);
    }

    std::vector<daeimp::SummaryRow> summary;
    json downstream_rows = json::array();
    std::string downstream_csv = "dataset,mechanism,pattern,t,method,task,score\n";
    bool any_downstream = false;
    json errors = json::array();
    std::size_t cells_run = 0, cells_skipped = 0;

    for (const BenchDataset& bd : datasets) {
        CsvFlags flags;
        flags.schema_path = bd.schema_path;

        for (const std::string& mech : mechanisms) {
            for (const std::string& pattern : patterns) {
                for (double t : proportions) {
                    const std::string cell = bd.name + "_" + mech + "_" + pattern + "_t" +
                                             daeimp::format_double(t);
                    const std::string cell_prefix = args.out_dir + "/" + cell;
                    try {
                        // --- induce (resumable) ---
                        const std::string masked_path = cell_prefix + ".masked.csv";
                        const std::string truth_path = cell_prefix + ".truth.csv";
                        const std::string prov_path = cell_prefix + ".provenance.json";
                        if (!(file_exists(masked_path) && file_exists(truth_path) &&
                              file_exists(prov_path))) {
                            InduceArgs ia;
                            ia.input = bd.path;
                            ia.out_prefix = cell_prefix;
                            ia.mechanism = mech;
                            ia.pattern = pattern;
                            ia.t = t;
                            ia.seed = master_seed + fnv1a64("induce|" + cell);
                            ia.csv = flags;
                            cmd_induce(ia);
                        }
                        const Dataset truth = load_input(truth_path, flags);
                        const Dataset masked =
                            daeimp::load_csv(masked_path, {}, &truth.schema);

                        const daeimp::EncodedMatrix enc_truth = daeimp::encode(truth);
                        const daeimp::Matrix mask = encoded_scoring_mask(
                            masked.missing, enc_truth.map, truth.rows());

                        std::map<std::string, std::vector<double>> method_scores;
                        std::map<std::string, std::vector<Dataset>> method_completions;

                        for (const std::string& method : methods) {
                            const std::string mprefix = cell_prefix + "." + method;
                            const std::string manifest_path = mprefix + ".manifest.json";

                            ImputeArgs ma = base;
                            ma.input = masked_path;
                            ma.method = method;
                            ma.seed = master_seed + fnv1a64("impute|" + cell + "|" + method);
                            ma.csv = flags;

                            std::vector<std::string> completion_paths;
                            for (std::size_t i = 1; i <= k; ++i) {
                                completion_paths.push_back(
                                    mprefix + ".imp" + std::to_string(i) + ".csv");
                            }
                            const bool done =
                                file_exists(manifest_path) &&
                                std::all_of(completion_paths.begin(), completion_paths.end(),
                                            [](const std::string& p) { return file_exists(p); });
                            if (done) {
                                ++cells_skipped;
                            } else {
                                run_impute(masked, ma, mprefix);
                                ++cells_run;
                            }

                            std::vector<double> scores;
                            std::vector<Dataset> completions;
                            for (const std::string& path : completion_paths) {
                                Dataset comp =
                                    daeimp::load_csv(path, {}, &truth.schema);
                                const daeimp::EncodedMatrix enc_comp =
                                    daeimp::apply_encoding(comp, enc_truth.map);
                                scores.push_back(daeimp::rmse_sum(enc_comp.values,
                                                                  enc_truth.values, mask,
                                                                  enc_truth.map)
                                                     .rmse_sum);
                                completions.push_back(std::move(comp));
                            }
                            method_scores[method] = scores;
                            method_completions[method] = std::move(completions);

                            daeimp::SummaryRow row;
                            row.dataset = bd.name;
                            row.mechanism = mech;
                            row.pattern = pattern;
                            row.t = t;
                            row.method = method;
                            row.rmse = daeimp::pool(scores);
                            summary.push_back(row);
                        }

                        // Error ratios against the reference method.
                        auto ref = method_scores.find(reference);
                        if (ref != method_scores.end()) {
                            for (daeimp::SummaryRow& row : summary) {
                                if (row.dataset != bd.name || row.mechanism != mech ||
                                    row.pattern != pattern || row.t != t) {
                                    continue;
                                }
                                if (row.method == reference) continue;
                                row.ratio_vs_reference = daeimp::error_ratio(
                                    method_scores.at(row.method), ref->second);
                            }
                        }

                        // Downstream comparison when a target is configured.
                        if (!bd.target.empty()) {
                            any_downstream = true;
                            daeimp::EvalConfig ec = eval_base;
                            ec.target_column = bd.target;
                            ec.seed = master_seed + fnv1a64("downstream|" + cell);
                            if (bd.task == "classification") {
                                ec.task = daeimp::TaskKind::Classification;
                            } else if (bd.task == "regression") {
                                ec.task = daeimp::TaskKind::Regression;
                            }
                            std::vector<daeimp::MethodCompletions> entries;
                            for (const std::string& method : methods) {
                                entries.push_back(
                                    {method, std::move(method_completions.at(method))});
                            }
                            entries.push_back({"truth", {truth}});
                            const std::vector<daeimp::MethodScore> scored =
                                daeimp::compare_methods(entries, ec);
                            for (const daeimp::MethodScore& ms : scored) {
                                downstream_rows.push_back({{"dataset", bd.name},
                                                           {"mechanism", mech},
                                                           {"pattern", pattern},
                                                           {"t", t},
                                                           {"method", ms.method},
                                                           {"task", daeimp::to_string(ms.task)},
                                                           {"score", ms.mean_score}});
                                downstream_csv += bd.name + "," + mech + "," + pattern +
                                                  "," + daeimp::format_double(t) + "," +
                                                  ms.method + "," +
                                                  daeimp::to_string(ms.task) + "," +
                                                  daeimp::format_double(ms.mean_score) +
                                                  "\n";
                            }
                        }
                    } catch (const std::exception& e) {
                        errors.push_back({{"cell", cell}, {"error", e.what()}});
                        std::fprintf(stderr, "bench cell %s failed: %s\n", cell.c_str(),
                                     e.what());
                    }
                }
            }
        }
    }

    summary = daeimp::summarize(std::move(summary));
    daeimp::write_file_atomic(args.out_dir + "/summary.csv",
                              daeimp::summary_to_csv(summary));

    json doc = tool_header("bench");
    doc["timestamps"] = {{"finished", utc_timestamp()}};
    doc["config"] = {{"path", args.config_path}, {"digest", file_digest(args.config_path)}};
    doc["master_seed"] = master_seed;
    doc["cells_imputed"] = cells_run;
    doc["cells_resumed"] = cells_skipped;
    json rows = json::array();
    for (const daeimp::SummaryRow& row : summary) {
        json r = {{"dataset", row.dataset}, {"mechanism", row.mechanism},
                  {"pattern", row.pattern}, {"t", row.t},
                  {"method", row.method},   {"rmse_mean", row.rmse.mean},
                  {"rmse_min", row.rmse.min}, {"rmse_max", row.rmse.max}};
        if (!std::isnan(row.ratio_vs_reference)) {
            r["ratio_vs_reference"] = row.ratio_vs_reference;
        }
        rows.push_back(std::move(r));
    }
    doc["summary"] = std::move(rows);
    doc["errors"] = errors;
    write_json(args.out_dir + "/summary.json", doc);

    if (any_downstream) {
        daeimp::write_file_atomic(args.out_dir + "/downstream.csv", downstream_csv);
        json ddoc = tool_header("bench");
        ddoc["rows"] = downstream_rows;
        write_json(args.out_dir + "/downstream.json", ddoc);
    }

    std::printf("bench: %zu summary rows (%zu cells imputed, %zu resumed, %zu errors)\n",
                summary.size(), cells_run, cells_skipped, errors.size());
    return errors.empty() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Denoising-autoencoder multiple imputation toolkit"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    InduceArgs induce_args;
    CLI::App* induce = app.add_subcommand("induce", "Mask cells of a complete CSV");
    induce->add_option("input", induce_args.input, "Complete input CSV")->required();
    induce->add_option("--mech", induce_args.mechanism, "mcar or mnar")
        ->check(CLI::IsMember({"mcar", "mnar"}));
    induce->add_option("--pattern", induce_args.pattern, "uniform or random")
        ->check(CLI::IsMember({"uniform", "random"}));
    induce->add_option("--t", induce_args.t, "Row-selection threshold (default 0.2)");
    induce->add_option("--seed", induce_args.seed, "Random seed")->required();
    induce->add_option("--out", induce_args.out_prefix,
                       "Output prefix (default: input path without extension)");
    add_csv_flags(induce, induce_args.csv);

    ImputeArgs impute_args;
    impute_args.workers = default_workers();
    CLI::App* impute = app.add_subcommand("impute", "Complete a masked CSV k times");
    impute->add_option("input", impute_args.input, "Masked input CSV")->required();
    impute->add_option("--method", impute_args.method, "dae, meanmode, or cepmm")
        ->check(CLI::IsMember({"dae", "meanmode", "cepmm"}));
    impute->add_option("--k", impute_args.k, "Number of imputations (default 5)");
    impute->add_option("--seed", impute_args.seed, "Master seed")->required();
    impute->add_option("--theta", impute_args.theta, "Hidden growth per layer (default 7)");
    impute->add_option("--depth", impute_args.depth, "Encoder depth (default 3)");
    impute->add_option("--epochs", impute_args.epochs, "Epoch budget (default 500)");
    impute->add_option("--dropout", impute_args.dropout, "Input corruption (default 0.5)");
    impute->add_option("--lr", impute_args.lr, "Base learning rate (default 0.01)");
    impute->add_option("--momentum", impute_args.momentum, "Momentum (default 0.9)");
    impute->add_option("--decay", impute_args.decay, "Per-epoch LR decay (default 0.99)");
    impute->add_option("--batch", impute_args.batch, "Batch size (0 = min(32, rows))");
    impute->add_option("--target-mse", impute_args.target_mse,
                       "Early-stop loss target (default 1e-6)");
    impute->add_option("--sma-window", impute_args.sma_window,
                       "Stall-detection window (default 5)");
    impute->add_option("--split", impute_args.split_ratio,
                       "Training split fraction (default 0.7)");
    impute->add_option("--iterations", impute_args.iterations,
                       "cepmm: sweeps per run (default 10)");
    impute->add_option("--donors", impute_args.donors,
                       "cepmm: donor pool size (default 5)");
    impute->add_flag("--random-sweep", impute_args.random_sweep,
                     "cepmm: shuffle column order each sweep");
    impute->add_option("--workers", impute_args.workers,
                       "Concurrent runs (default $DAEIMP_WORKERS or 1)");
    impute->add_option("--out", impute_args.out_prefix,
                       "Output prefix (default: input path without extension)");
    add_csv_flags(impute, impute_args.csv);

    ScoreArgs score_args;
    CLI::App* score = app.add_subcommand("score", "Score completions against the truth");
    score->add_option("completions", score_args.completions, "Completed CSVs")
        ->required()
        ->expected(-1);
    score->add_option("--truth", score_args.truth_path, "Complete truth CSV")->required();
    score->add_option("--provenance", score_args.provenance_path,
                      "Provenance JSON from induce (mask + schema)");
    score->add_option("--masked", score_args.masked_path,
                      "Masked CSV (mask source when no provenance)");
    score->add_option("--manifest", score_args.manifest_path,
                      "Impute manifest (for --scope test)");
    score->add_option("--scope", score_args.scope, "all or test (default all)")
        ->check(CLI::IsMember({"all", "test"}));
    score->add_option("--compare", score_args.compare_path,
                      "Another score JSON; emits the error ratio against it");
    score->add_option("--method", score_args.method, "Label for the report");
    score->add_option("--out", score_args.out_prefix,
                      "Output prefix (default: first completion without extension)");
    add_csv_flags(score, score_args.csv);

    EvalArgs eval_args;
    CLI::App* eval = app.add_subcommand("evaluate-downstream",
                                        "Cross-validate a predictor on completions");
    eval->add_option("completions", eval_args.completions, "Completed CSVs")
        ->required()
        ->expected(-1);
    eval->add_option("--target", eval_args.target, "Target column name")->required();
    eval->add_option("--task", eval_args.task, "auto, classification, or regression")
        ->check(CLI::IsMember({"auto", "classification", "regression"}));
    eval->add_option("--truth", eval_args.truth_path,
                     "Complete truth CSV (adds an upper-reference row)");
    eval->add_option("--folds", eval_args.folds, "CV folds (default 5)");
    eval->add_option("--repeats", eval_args.repeats, "CV repeats (default 5)");
    eval->add_option("--knn", eval_args.knn, "Neighbors (default 5)");
    eval->add_option("--seed", eval_args.seed, "Fold seed")->required();
    eval->add_option("--method", eval_args.method, "Label for the report");
    eval->add_option("--out", eval_args.out_prefix,
                     "Output prefix (default: first completion without extension)");
    add_csv_flags(eval, eval_args.csv);

    BenchArgs bench_args;
    bench_args.workers = default_workers();
    CLI::App* bench = app.add_subcommand("bench", "Run a benchmark grid from JSON config");
    bench->add_option("--config", bench_args.config_path, "Grid config JSON")->required();
    bench->add_option("--out", bench_args.out_dir, "Output directory (must exist)")
        ->required();
    bench->add_option("--workers", bench_args.workers,
                      "Concurrent MI runs (default $DAEIMP_WORKERS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (induce->parsed()) return cmd_induce(induce_args);
        if (impute->parsed()) return cmd_impute(impute_args);
        if (score->parsed()) return cmd_score(score_args);
        if (eval->parsed()) return cmd_evaluate(eval_args);
        if (bench->parsed()) return cmd_bench(bench_args);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
