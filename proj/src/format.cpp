#include "geyser/format.hpp"

#include <algorithm>
#include <cstdio>

namespace geyser {

namespace {

constexpr const char* kZColumnLabel = "+/- Amount of minutes in each direction";

std::string format_z(double z) {
    if (z == static_cast<double>(static_cast<long long>(z)))
        return std::to_string(static_cast<long long>(z));
    return format_sig(z, 6);
}

std::string format_cell(double fraction, TableStyle style) {
    return style == TableStyle::percent_sig3 ? format_sig(fraction * 100.0, 3)
                                             : format_fixed(fraction, 3);
}

} // namespace

std::string format_sig(double value, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
    return buf;
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

std::string accuracy_table_csv(const AccuracyTable& table, TableStyle style) {
    std::string out = "z_min";
    for (const auto& id : table.predictor_ids) {
        out.push_back(',');
        out += id;
    }
    out.push_back('\n');
    for (std::size_t zi = 0; zi < table.z_values.size(); ++zi) {
        out += format_z(table.z_values[zi]);
        for (const double cell : table.cells[zi]) {
            out.push_back(',');
            out += format_cell(cell, style);
        }
        out.push_back('\n');
    }
    return out;
}

std::string accuracy_table_markdown(const AccuracyTable& table, TableStyle style) {
    const std::size_t columns = table.predictor_ids.size() + 1;
    std::vector<std::vector<std::string>> grid;
    grid.reserve(table.z_values.size() + 1);

    std::vector<std::string> header;
    header.emplace_back(kZColumnLabel);
    for (const auto& id : table.predictor_ids) header.push_back(id);
    grid.push_back(std::move(header));
    for (std::size_t zi = 0; zi < table.z_values.size(); ++zi) {
        std::vector<std::string> row;
        row.push_back(format_z(table.z_values[zi]));
        for (const double cell : table.cells[zi]) row.push_back(format_cell(cell, style));
        grid.push_back(std::move(row));
    }

    std::vector<std::size_t> widths(columns, 0);
    for (const auto& row : grid)
        for (std::size_t c = 0; c < columns; ++c) widths[c] = std::max(widths[c], row[c].size());

    std::string out;
    const auto emit_row = [&](const std::vector<std::string>& row) {
        out.push_back('|');
        for (std::size_t c = 0; c < columns; ++c) {
            out.push_back(' ');
            out += row[c];
            out.append(widths[c] - row[c].size(), ' ');
            out += " |";
        }
        out.push_back('\n');
    };
    emit_row(grid[0]);
    out.push_back('|');
    for (std::size_t c = 0; c < columns; ++c) {
        out.push_back(' ');
        out.append(widths[c], '-');
        out += " |";
    }
    out.push_back('\n');
    for (std::size_t r = 1; r < grid.size(); ++r) emit_row(grid[r]);
    return out;
}

std::string model_param_block(const std::vector<RegressionModel>& models) {
    std::string out;
    for (const auto& model : models) {
        const auto kind = to_string(model.kind);
        const auto emit = [&](const char* field, const std::string& value) {
            out.append(kind);
            out.push_back('.');
            out += field;
            out.push_back('=');
            out += value;
            out.push_back('\n');
        };
        emit("kind", std::string(kind));
        static constexpr const char* kLinearNames[] = {"a", "b"};
        static constexpr const char* kExponentialNames[] = {"a", "b", "c"};
        static constexpr const char* kSigmoidalNames[] = {"L", "k", "x0", "y0"};
        const char* const* names = model.kind == ModelKind::linear ? kLinearNames
                                   : model.kind == ModelKind::exponential ? kExponentialNames
                                                                          : kSigmoidalNames;
        for (Eigen::Index i = 0; i < model.params.size(); ++i)
            emit(names[i], format_sig(model.params[i], 12));
        emit("sse", format_sig(model.sse, 12));
        emit("n", std::to_string(model.n));
        emit("converged", model.converged ? "true" : "false");
    }
    return out;
}

std::string filter_report_block(const FilterReport& report, std::size_t parse_errors) {
    std::string out;
    const auto emit = [&](const char* key, std::size_t value) {
        out += key;
        out.push_back('=');
        out += std::to_string(value);
        out.push_back('\n');
    };
    emit("parse_errors", parse_errors);
    emit("input_count", report.input_count);
    emit("kept", report.kept);
    emit("removed_before_min_start", report.removed_before_min_start);
    emit("removed_hour_precision", report.removed_hour_precision);
    emit("removed_unresolvable", report.removed_unresolvable);
    return out;
}

std::string interval_pairs_csv(const std::vector<IntervalPair>& pairs) {
    std::string out = "x_duration_min,y_gap_min\n";
    for (const auto& pair : pairs) {
        out += format_sig(pair.x_duration_min, 12);
        out.push_back(',');
        out += format_sig(pair.y_gap_min, 12);
        out.push_back('\n');
    }
    return out;
}

std::string trend_csv(const std::vector<OffsetPairing>& pairings, double slope, double intercept) {
    std::string out = "sequence_index,offset_min,fitted_min\n";
    for (const auto& pairing : pairings) {
        out += std::to_string(pairing.sequence_index);
        out.push_back(',');
        out += format_sig(pairing.offset_min, 12);
        out.push_back(',');
        out += format_sig(slope * static_cast<double>(pairing.sequence_index) + intercept, 12);
        out.push_back('\n');
    }
    return out;
}

std::string grid_curve_csv(const GridSearchResult& grid) {
    std::string out = "offset_min,accuracy\n";
    for (const auto& [offset, accuracy] : grid.grid) {
        out += format_sig(offset, 12);
        out.push_back(',');
        out += format_sig(accuracy, 12);
        out.push_back('\n');
    }
    return out;
}

} // namespace geyser
