#pragma once

#include "v2vlos/curve.hpp"
#include "v2vlos/estimation.hpp"
#include "v2vlos/scenario_model.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace v2vlos {

struct Point {
    double d = 0.0;
    double y = 0.0;
};

/// Sum of squared residuals of `curve` (unclamped) over `points`.
double residual_sum(const CurveSpec& curve, std::span<const Point> points) noexcept;

struct Poly2Fit {
    Poly2 curve;
    double residual = 0.0;
    /// sqrt(diag(sigma^2 (X'X)^-1)) with sigma^2 = residual / (n - 3); zero
    /// when n == 3.
    std::array<double, 3> std_errors{};
};

/// Least squares quadratic via the normal equations (solved in a rescaled
/// distance variable). SingularError with fewer than three distinct d.
Poly2Fit fit_poly2(std::span<const Point> points);

struct ExpDecayFit {
    ExpDecay curve;
    double residual = 0.0;
    std::size_t excluded = 0; ///< points with y <= 0 left out of the log fit
};

/// Linear least squares on ln y. DegenerateError with fewer than two usable
/// points; SingularError when they share one distance.
ExpDecayFit fit_exp_decay(std::span<const Point> points);

struct LogBellFit {
    LogBell curve;
    double residual = 0.0;
    double grid_residual = 0.0;
};

/// Grid search over (mu, k) with the amplitude 1/s solved in closed form,
/// followed by Nelder-Mead refinement. Requires at least four points, d > 0
/// and y >= 0 (DomainError), and some positive y (DegenerateError).
/// ConvergenceError if refinement ends worse than the grid optimum.
LogBellFit fit_logbell(std::span<const Point> points);

struct OffsetMinusLogBellFit {
    OffsetMinusLogBell curve;
    double residual = 0.0;
};

/// offset - LogBell: offset searched over candidates at and above max(y),
/// the inner bell fitted to offset - y for each candidate.
OffsetMinusLogBellFit fit_offset_minus_logbell(std::span<const Point> points);

/// Fits `shape`'s family to `points`; Piecewise splits the points at the same
/// threshold and fits each branch. Returns the fitted curve and its residual.
struct CurveFit {
    CurveSpec curve;
    double residual = 0.0;
};

CurveFit fit_like(const CurveSpec& shape, std::span<const Point> points);

struct ModelFit {
    ScenarioModel model;
    /// Curves that kept the reference value because their data was too sparse,
    /// e.g. "transition NLOSv->LOS: <reason>".
    std::vector<std::string> fallbacks;
};

/// Refits every explicit curve of `reference` on the per-bin estimates in
/// `stats`, keeping the reference structure.
ModelFit fit_scenario(const EmpiricalStats& stats, const ScenarioModel& reference);

} // namespace v2vlos
