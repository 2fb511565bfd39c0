#pragma once

#include "v2vlos/fit.hpp"
#include "v2vlos/scenario_model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace v2vlos {

/// Sampled model curves: one row per distance with columns
/// d, P_LOS, P_NLOSv, P_NLOSb, T_LOS_LOS, T_LOS_NLOSv, ..., T_NLOSb_NLOSb.
struct CurveTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// (d, value) pairs of one named column; ParseError if absent.
    std::vector<Point> series(std::string_view column) const;
};

CurveTable sample_curves(const ScenarioModel& model, double d_lo, double d_hi, double step);

std::string format_curve_table(const CurveTable& table);

/// Reads format_curve_table output ('#' comments allowed).
CurveTable parse_curve_table(std::string_view text);

} // namespace v2vlos
