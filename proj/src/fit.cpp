#include "v2vlos/fit.hpp"

#include "v2vlos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

namespace v2vlos {

double residual_sum(const CurveSpec& curve, std::span<const Point> points) noexcept
{
    double sum = 0.0;
    for (const auto& p : points) {
        const double r = p.y - curve.raw(p.d);
        sum += r * r;
    }
    return sum;
}

namespace {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

/// Gaussian elimination with partial pivoting; SingularError on a pivot that
/// is negligible relative to the matrix scale.
Vec3 solve3(Mat3 a, Vec3 b)
{
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row)
            scale = std::max(scale, std::abs(v));
    if (scale == 0.0)
        throw SingularError("normal equations are all zero");

    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < 3; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        if (std::abs(a[pivot][col]) <= 1e-12 * scale)
            throw SingularError("rank-deficient design matrix");
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < 3; ++c)
                a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    Vec3 x{};
    for (std::size_t i = 3; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < 3; ++c)
            s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

std::size_t distinct_distances(std::span<const Point> points)
{
    std::set<double> ds;
    for (const auto& p : points)
        ds.insert(p.d);
    return ds.size();
}

void require_finite(std::span<const Point> points)
{
    for (const auto& p : points)
        if (!std::isfinite(p.d) || !std::isfinite(p.y))
            throw DomainError("fit input contains a non-finite value");
}

} // namespace

Poly2Fit fit_poly2(std::span<const Point> points)
{
    require_finite(points);
    if (distinct_distances(points) < 3)
        throw SingularError("quadratic fit needs at least three distinct distances");

    // Solve in x = (d - center) / spread, then map the coefficients back.
    double lo = points.front().d, hi = points.front().d;
    for (const auto& p : points) {
        lo = std::min(lo, p.d);
        hi = std::max(hi, p.d);
    }
    const double center = (lo + hi) / 2;
    const double spread = (hi - lo) / 2;

    Mat3 xtx{};
    Vec3 xty{};
    for (const auto& p : points) {
        const double x = (p.d - center) / spread;
        const Vec3 row{x * x, x, 1.0};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j)
                xtx[i][j] += row[i] * row[j];
            xty[i] += row[i] * p.y;
        }
    }
    const Vec3 scaled = solve3(xtx, xty);
    const double s2 = spread * spread;

    // d-space coefficients are a linear map J of the scaled ones.
    const Mat3 jac{{
        {1.0 / s2, 0.0, 0.0},
        {-2.0 * center / s2, 1.0 / spread, 0.0},
        {center * center / s2, -center / spread, 1.0},
    }};
    Vec3 coeffs{};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            coeffs[i] += jac[i][j] * scaled[j];

    Poly2Fit fit;
    fit.curve = Poly2{coeffs[0], coeffs[1], coeffs[2]};
    fit.residual = residual_sum(CurveSpec(fit.curve), points);

    const std::size_t n = points.size();
    if (n > 3) {
        const double sigma2 = fit.residual / static_cast<double>(n - 3);
        Mat3 inv{};
        for (std::size_t k = 0; k < 3; ++k) {
            Vec3 e{};
            e[k] = 1.0;
            const Vec3 col = solve3(xtx, e);
            for (std::size_t i = 0; i < 3; ++i)
                inv[i][k] = col[i];
        }
        for (std::size_t i = 0; i < 3; ++i) {
            double var = 0.0;
            for (std::size_t p = 0; p < 3; ++p)
                for (std::size_t q = 0; q < 3; ++q)
                    var += jac[i][p] * inv[p][q] * jac[i][q];
            fit.std_errors[i] = std::sqrt(std::max(0.0, sigma2 * var));
        }
    }
    return fit;
}

ExpDecayFit fit_exp_decay(std::span<const Point> points)
{
    require_finite(points);
    ExpDecayFit fit;
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::set<double> ds;
    for (const auto& p : points) {
        if (p.y <= 0.0) {
            ++fit.excluded;
            continue;
        }
        const double ly = std::log(p.y);
        n += 1.0;
        sx += p.d;
        sy += ly;
        sxx += p.d * p.d;
        sxy += p.d * ly;
        ds.insert(p.d);
    }
    if (n < 2.0)
        throw DegenerateError("exponential fit needs at least two positive samples");
    if (ds.size() < 2)
        throw SingularError("exponential fit needs two distinct distances");
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    fit.curve = ExpDecay{std::exp(intercept), -slope};
    fit.residual = residual_sum(CurveSpec(fit.curve), points);
    return fit;
}

namespace {

using Vec2 = std::array<double, 2>;

/// Nelder-Mead minimizer in two dimensions.
Vec2 nelder_mead(const std::function<double(const Vec2&)>& f, Vec2 start, Vec2 step, std::size_t max_iter = 4000)
{
    std::array<Vec2, 3> x{start, {start[0] + step[0], start[1]}, {start[0], start[1] + step[1]}};
    std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};

    for (std::size_t it = 0; it < max_iter; ++it) {
        std::array<std::size_t, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = idx[0], mid = idx[1], worst = idx[2];

        const double size = std::max({std::abs(x[mid][0] - x[best][0]), std::abs(x[worst][0] - x[best][0]),
                                      std::abs(x[mid][1] - x[best][1]), std::abs(x[worst][1] - x[best][1])});
        if (size < 1e-12 || std::abs(fx[worst] - fx[best]) <= 1e-30)
            break;

        const Vec2 centroid{(x[best][0] + x[mid][0]) / 2, (x[best][1] + x[mid][1]) / 2};
        auto along = [&](double t) {
            return Vec2{centroid[0] + t * (x[worst][0] - centroid[0]), centroid[1] + t * (x[worst][1] - centroid[1])};
        };

        const Vec2 xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fx[best]) {
            const Vec2 xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                x[worst] = xe;
                fx[worst] = fe;
            } else {
                x[worst] = xr;
                fx[worst] = fr;
            }
        } else if (fr < fx[mid]) {
            x[worst] = xr;
            fx[worst] = fr;
        } else {
            const Vec2 xc = fr < fx[worst] ? along(-0.5) : along(0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fx[worst])) {
                x[worst] = xc;
                fx[worst] = fc;
            } else {
                for (std::size_t i : {mid, worst}) {
                    x[i] = Vec2{(x[i][0] + x[best][0]) / 2, (x[i][1] + x[best][1]) / 2};
                    fx[i] = f(x[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (fx[i] < fx[best])
            best = i;
    return x[best];
}

struct BellProfile {
    std::span<const Point> points;

    /// Best amplitude 1/s for fixed (mu, ln k) and the resulting residual.
    std::pair<double, double> evaluate(double mu, double log_k) const
    {
        const double k = std::exp(log_k);
        double gy = 0.0, gg = 0.0;
        for (const auto& p : points) {
            const double u = std::log(p.d) - mu;
            const double g = std::exp(-u * u / k) / p.d;
            gy += g * p.y;
            gg += g * g;
        }
        const double amp = gg > 0.0 && gy > 0.0 ? gy / gg : 0.0;
        double sse = 0.0;
        for (const auto& p : points) {
            const double u = std::log(p.d) - mu;
            const double r = p.y - amp * std::exp(-u * u / k) / p.d;
            sse += r * r;
        }
        return {amp, sse};
    }
};

} // namespace

LogBellFit fit_logbell(std::span<const Point> points)
{
    require_finite(points);
    if (points.size() < 4)
        throw DomainError("log-bell fit needs at least four points");
    double d_lo = std::numeric_limits<double>::max(), d_hi = 0.0;
    bool any_positive = false;
    for (const auto& p : points) {
        if (p.d <= 0.0)
            throw DomainError("log-bell fit needs d > 0");
        if (p.y < 0.0)
            throw DomainError("log-bell fit needs y >= 0");
        any_positive = any_positive || p.y > 0.0;
        d_lo = std::min(d_lo, p.d);
        d_hi = std::max(d_hi, p.d);
    }
    if (!any_positive)
        throw DegenerateError("log-bell fit of all-zero data");

    const BellProfile profile{points};

    // Coarse grid over the peak location and width.
    constexpr std::size_t kMuSteps = 81, kWidthSteps = 61;
    const double mu_lo = std::log(d_lo) - 1.5, mu_hi = std::log(d_hi) + 1.5;
    const double lk_lo = std::log(0.05), lk_hi = std::log(20.0);
    const double mu_step = (mu_hi - mu_lo) / (kMuSteps - 1);
    const double lk_step = (lk_hi - lk_lo) / (kWidthSteps - 1);

    Vec2 grid_best{mu_lo, lk_lo};
    double grid_sse = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < kMuSteps; ++i)
        for (std::size_t j = 0; j < kWidthSteps; ++j) {
            const Vec2 x{mu_lo + mu_step * static_cast<double>(i), lk_lo + lk_step * static_cast<double>(j)};
            const auto [amp, sse] = profile.evaluate(x[0], x[1]);
            if (amp > 0.0 && sse < grid_sse) {
                grid_sse = sse;
                grid_best = x;
            }
        }
    if (!std::isfinite(grid_sse))
        throw DegenerateError("no positive log-bell amplitude fits the data");

    auto objective = [&](const Vec2& x) {
        const auto [amp, sse] = profile.evaluate(x[0], x[1]);
        return amp > 0.0 && std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
    };
    Vec2 refined = nelder_mead(objective, grid_best, {mu_step / 2, lk_step / 2});
    // Restart once from the refined point.
    refined = nelder_mead(objective, refined, {mu_step / 20, lk_step / 20});

    const auto [amp, sse] = profile.evaluate(refined[0], refined[1]);
    if (!(amp > 0.0) || !std::isfinite(sse) || sse > grid_sse)
        throw ConvergenceError("log-bell refinement did not improve on the grid optimum");

    LogBellFit fit;
    fit.curve = LogBell{1.0 / amp, refined[0], std::exp(refined[1])};
    fit.residual = sse;
    fit.grid_residual = grid_sse;
    return fit;
}

OffsetMinusLogBellFit fit_offset_minus_logbell(std::span<const Point> points)
{
    require_finite(points);
    if (points.size() < 4)
        throw DomainError("offset log-bell fit needs at least four points");
    double y_max = -std::numeric_limits<double>::infinity();
    for (const auto& p : points)
        y_max = std::max(y_max, p.y);

    std::vector<Point> shifted(points.begin(), points.end());
    auto attempt = [&](double offset) -> std::optional<LogBellFit> {
        for (std::size_t i = 0; i < points.size(); ++i)
            shifted[i].y = offset - points[i].y;
        try {
            return fit_logbell(shifted);
        } catch (const DegenerateError&) {
            return std::nullopt;
        } catch (const ConvergenceError&) {
            return std::nullopt;
        }
    };
    auto cost = [&](double delta) {
        auto f = attempt(y_max + delta);
        return f ? f->residual : std::numeric_limits<double>::infinity();
    };

    // Offsets at and above max(y), then golden-section between the
    // neighbours of the best candidate.
    const std::vector<double> deltas{0.0, 1e-4, 3e-4, 1e-3, 2e-3, 4e-3, 7e-3, 0.01, 0.02, 0.04, 0.07, 0.1, 0.2, 0.4};
    std::vector<double> costs;
    for (double delta : deltas)
        costs.push_back(cost(delta));
    const auto best_it = std::min_element(costs.begin(), costs.end());
    if (!std::isfinite(*best_it))
        throw DegenerateError("no offset candidate produced a log-bell fit");
    const auto best = static_cast<std::size_t>(best_it - costs.begin());

    double lo = deltas[best == 0 ? 0 : best - 1];
    double hi = deltas[std::min(best + 1, deltas.size() - 1)];
    double best_delta = deltas[best];
    double best_cost = costs[best];
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
    double fa = cost(a), fb = cost(b);
    for (int it = 0; it < 60 && hi - lo > 1e-9; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - phi * (hi - lo);
            fa = cost(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + phi * (hi - lo);
            fb = cost(b);
        }
    }
    for (auto [delta, c] : {std::pair{a, fa}, std::pair{b, fb}})
        if (c < best_cost) {
            best_cost = c;
            best_delta = delta;
        }

    const auto inner = attempt(y_max + best_delta);
    OffsetMinusLogBellFit fit;
    fit.curve = OffsetMinusLogBell{y_max + best_delta, inner->curve};
    fit.residual = residual_sum(CurveSpec(fit.curve), points);
    return fit;
}

CurveFit fit_like(const CurveSpec& shape, std::span<const Point> points)
{
    if (shape.get_if<Poly2>()) {
        const auto f = fit_poly2(points);
        return {f.curve, f.residual};
    }
    if (shape.get_if<ExpDecay>()) {
        const auto f = fit_exp_decay(points);
        return {f.curve, f.residual};
    }
    if (shape.get_if<LogBell>()) {
        const auto f = fit_logbell(points);
        return {f.curve, f.residual};
    }
    if (shape.get_if<OffsetMinusLogBell>()) {
        const auto f = fit_offset_minus_logbell(points);
        return {f.curve, f.residual};
    }
    const auto& pw = *shape.get_if<Piecewise>();
    std::vector<Point> near, far;
    for (const auto& p : points)
        (p.d < pw.threshold ? near : far).push_back(p);
    const CurveFit low = fit_like(*pw.low, near);
    const CurveFit high = fit_like(*pw.high, far);
    return {CurveSpec::piecewise(pw.threshold, low.curve, high.curve), low.residual + high.residual};
}

namespace {

ExplicitCurve refit(const ExplicitCurve& reference, const std::vector<Point>& points, const std::string& label,
                    std::vector<std::string>& fallbacks)
{
    try {
        return ExplicitCurve{reference.state, fit_like(reference.curve, points).curve};
    } catch (const Error& e) {
        fallbacks.push_back(label + ": " + e.what());
        return reference;
    }
}

} // namespace

ModelFit fit_scenario(const EmpiricalStats& stats, const ScenarioModel& reference)
{
    const auto states = empirical_state_probs(stats);
    const auto transitions = empirical_transition_probs(stats);
    std::vector<std::string> fallbacks;

    auto state_curve = [&](const ExplicitCurve& ec) {
        std::vector<Point> pts;
        for (const auto& e : states)
            if (e.p)
                pts.push_back({e.bin.center(), (*e.p)[index_of(ec.state)]});
        return refit(ec, pts, "state " + std::string(to_string(ec.state)), fallbacks);
    };
    const auto& sp = reference.state_probs.explicit_curves();
    StateProbModel probs(state_curve(sp[0]), state_curve(sp[1]));

    std::vector<TransitionRowModel> rows;
    for (const auto& row : reference.rows) {
        const std::size_t from = index_of(row.origin());
        auto row_curve = [&](const ExplicitCurve& ec) {
            std::vector<Point> pts;
            for (const auto& e : transitions)
                if (e.rows[from])
                    pts.push_back({e.bin.center(), (*e.rows[from])[index_of(ec.state)]});
            return refit(ec, pts,
                         "transition " + std::string(to_string(row.origin())) + "->" +
                             std::string(to_string(ec.state)),
                         fallbacks);
        };
        const auto& ex = row.explicit_curves();
        rows.emplace_back(row.origin(), row_curve(ex[0]), row_curve(ex[1]));
    }

    ScenarioModel model{reference.environment, reference.density,      std::move(probs),
                        {rows[0], rows[1], rows[2]}, reference.valid_range, reference.above_range,
                        reference.repair};
    return {std::move(model), std::move(fallbacks)};
}

} // namespace v2vlos
