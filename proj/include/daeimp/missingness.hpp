#pragma once

#include <cstdint>
#include <vector>

#include "daeimp/dataset.hpp"

namespace daeimp {

// MCAR masks rows purely by a uniform draw; MNAR additionally requires a
// value condition on two driver columns, so missingness depends on the data.
enum class Mechanism { MCAR, MNAR };

// Uniform masks every attribute of a selected row; Random masks a fixed
// half of the attributes (floor(m/2), sampled once per induction run).
enum class Pattern { Uniform, Random };

const char* to_string(Mechanism m);
const char* to_string(Pattern p);
Mechanism mechanism_from_string(const std::string& text);
Pattern pattern_from_string(const std::string& text);

struct MissingnessSpec {
    Mechanism mechanism = Mechanism::MCAR;
    Pattern pattern = Pattern::Uniform;
    double t = 0.20; // row-selection threshold, nominal missingness proportion
    std::uint64_t seed = 0;
};

struct InducedDataset {
    Dataset observed; // truth values with the induced mask applied
    Dataset truth;    // the complete input
    std::vector<std::vector<std::uint8_t>> induced_mask; // [col][row], matches observed.missing
    double achieved_proportion = 0.0; // masked cells / total cells

    // MNAR bookkeeping; empty for MCAR.
    std::vector<std::size_t> driver_columns; // the sampled pair
    std::vector<double> driver_medians;      // lower medians of the pair

    // Random-pattern bookkeeping; empty for Uniform.
    std::vector<std::size_t> masked_attributes; // ascending
};

// Masks cells of a complete dataset. Draw order from Rng(seed): the
// row-selection vector v (one uniform per row), then for MNAR the two
// distinct driver columns, then for the Random pattern the attribute subset.
//
// Row selection: v_i <= t, and for MNAR additionally
// x1_i <= median(x1) or x2_i >= median(x2). Medians are lower medians; driver
// columns are drawn among continuous columns when at least two exist,
// otherwise among all columns using category ranks as values.
//
// Under MNAR the conjunction makes the achieved fraction land below t
// (roughly t times the value-condition rate); the literal procedure is kept
// and the achieved proportion reported rather than re-normalized.
//
// Throws config_error for t outside [0,1], data_error for pre-existing
// missing cells or for MNAR on fewer than 2 columns.
InducedDataset induce(const Dataset& ds, const MissingnessSpec& spec);

struct MissingnessStats {
    double overall_fraction = 0.0;
    std::vector<double> column_fractions;
    std::size_t rows_masked = 0;          // rows with at least one masked cell
    double row_condition_hit_rate = 0.0;  // value-condition rate; 1 under MCAR
};

MissingnessStats achieved_stats(const InducedDataset& ind);

} // namespace daeimp
