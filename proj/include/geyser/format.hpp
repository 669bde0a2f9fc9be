#pragma once

#include <string>
#include <vector>

#include "geyser/evaluate.hpp"
#include "geyser/offset.hpp"
#include "geyser/prep.hpp"
#include "geyser/regress.hpp"

namespace geyser {

/// %.Ng / %.Nf with the C locale; all report numbers go through these.
std::string format_sig(double value, int significant_digits);
std::string format_fixed(double value, int decimals);

/// Table 1 layout shows percentages to 3 significant figures; Table 2
/// layout shows fractions to 3 decimals.
enum class TableStyle { percent_sig3, fraction_dec3 };

std::string accuracy_table_csv(const AccuracyTable& table, TableStyle style);
std::string accuracy_table_markdown(const AccuracyTable& table, TableStyle style);

/// key=value block per model: kind, named parameters, sse, n, convergence.
/// 12 significant digits.
std::string model_param_block(const std::vector<RegressionModel>& models);

std::string filter_report_block(const FilterReport& report, std::size_t parse_errors);

/// Fig-1 style scatter export: x_duration_min,y_gap_min rows.
std::string interval_pairs_csv(const std::vector<IntervalPair>& pairs);

/// Fig-2 style trend export: sequence_index,offset_min,fitted_min rows.
std::string trend_csv(const std::vector<OffsetPairing>& pairings, double slope, double intercept);

/// Fig-3 style grid export: offset_min,accuracy rows.
std::string grid_curve_csv(const GridSearchResult& grid);

} // namespace geyser
