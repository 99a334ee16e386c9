#include "daeimp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "daeimp/csv.hpp"

namespace daeimp {

const char* to_string(ScoreScope scope) {
    return scope == ScoreScope::AllMissing ? "all_missing" : "test_missing";
}

ScoreReport rmse_sum(const Matrix& imputed, const Matrix& truth,
                     const Matrix& scoring_mask, const EncodingMap& map,
                     ScoreScope scope) {
    require_same_shape(imputed, truth, "rmse_sum values");
    require_same_shape(imputed, scoring_mask, "rmse_sum mask");
    if (imputed.cols != map.encoded_cols) {
        throw shape_error("rmse_sum: matrices have " + std::to_string(imputed.cols) +
                          " columns, map encodes " + std::to_string(map.encoded_cols));
    }

    ScoreReport report;
    report.restricted_to = scope;
    report.per_attribute_rmse.resize(map.spans.size(), 0.0);

    for (std::size_t a = 0; a < map.spans.size(); ++a) {
        const ColumnSpan span = map.spans[a];
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < imputed.rows; ++r) {
            for (std::size_t j = 0; j < span.width; ++j) {
                const std::size_t c = span.begin + j;
                if (scoring_mask(r, c) == 0.0) continue;
                const double d = imputed(r, c) - truth(r, c);
                sq += d * d;
                ++count;
            }
        }
        if (count > 0) {
            report.per_attribute_rmse[a] = std::sqrt(sq / static_cast<double>(count));
            report.cells_scored += count;
        }
        report.rmse_sum += report.per_attribute_rmse[a];
    }
    if (report.cells_scored == 0) {
        throw data_error("rmse_sum: scoring mask selects no cells");
    }
    return report;
}

double error_ratio(const std::vector<double>& e_model,
                   const std::vector<double>& e_reference) {
    if (e_model.empty() || e_reference.empty()) {
        throw data_error("error_ratio: empty error list");
    }
    double model = 0.0, reference = 0.0;
    for (double v : e_model) model += v;
    for (double v : e_reference) reference += v;
    model /= static_cast<double>(e_model.size());
    reference /= static_cast<double>(e_reference.size());
    if (!(reference > 0.0)) {
        throw data_error("error_ratio: reference mean must be positive");
    }
    return model / reference;
}

PooledStat pool(const std::vector<double>& values) {
    if (values.empty()) throw data_error("pool: no values");
    PooledStat s;
    s.min = s.max = values.front();
    for (double v : values) {
        s.mean += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean /= static_cast<double>(values.size());
    return s;
}

std::vector<SummaryRow> summarize(std::vector<SummaryRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.dataset, a.mechanism, a.pattern, a.t, a.method) <
               std::tie(b.dataset, b.mechanism, b.pattern, b.t, b.method);
    });
    return rows;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::string out =
        "dataset,mechanism,pattern,t,method,rmse_mean,rmse_min,rmse_max,"
        "ratio_vs_reference\n";
    for (const SummaryRow& row : rows) {
        out += row.dataset + ',' + row.mechanism + ',' + row.pattern + ',' +
               format_double(row.t) + ',' + row.method + ',' +
               format_double(row.rmse.mean) + ',' + format_double(row.rmse.min) + ',' +
               format_double(row.rmse.max) + ',';
        out += std::isnan(row.ratio_vs_reference) ? "?"
                                                  : format_double(row.ratio_vs_reference);
        out += '\n';
    }
    return out;
}

} // namespace daeimp
