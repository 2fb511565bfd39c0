#include "v2vlos/curve.hpp"

#include "v2vlos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace v2vlos {

namespace {

void require_finite(double v, const char* what)
{
    if (!std::isfinite(v))
        throw DomainError(std::string("curve parameter ") + what + " is not finite");
}

void check(const LogBell& l)
{
    require_finite(l.s, "s");
    require_finite(l.mu, "mu");
    require_finite(l.k, "k");
    if (l.s <= 0.0)
        throw DomainError("log-bell scale s must be positive");
    if (l.k <= 0.0)
        throw DomainError("log-bell width k must be positive");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

bool operator==(const Piecewise& x, const Piecewise& y)
{
    auto same = [](const std::shared_ptr<const CurveSpec>& a, const std::shared_ptr<const CurveSpec>& b) {
        if (!a || !b)
            return a == b;
        return *a == *b;
    };
    return x.threshold == y.threshold && same(x.low, y.low) && same(x.high, y.high);
}

CurveSpec::CurveSpec(Poly2 p) : node_(p)
{
    require_finite(p.a, "a");
    require_finite(p.b, "b");
    require_finite(p.c, "c");
}

CurveSpec::CurveSpec(ExpDecay e) : node_(e)
{
    require_finite(e.a, "a");
    require_finite(e.b, "b");
}

CurveSpec::CurveSpec(LogBell l) : node_(l)
{
    check(l);
}

CurveSpec::CurveSpec(OffsetMinusLogBell o) : node_(o)
{
    require_finite(o.offset, "offset");
    check(o.inner);
}

CurveSpec CurveSpec::piecewise(double threshold, CurveSpec low, CurveSpec high)
{
    require_finite(threshold, "d_T");
    if (threshold <= 0.0)
        throw DomainError("piecewise threshold must be positive");
    return CurveSpec(Node{Piecewise{threshold, std::make_shared<const CurveSpec>(std::move(low)),
                                    std::make_shared<const CurveSpec>(std::move(high))}});
}

bool CurveSpec::has_log_term() const noexcept
{
    return std::visit(overloaded{
                          [](const Poly2&) { return false; },
                          [](const ExpDecay&) { return false; },
                          [](const LogBell&) { return true; },
                          [](const OffsetMinusLogBell&) { return true; },
                          [](const Piecewise& p) { return p.low->has_log_term() || p.high->has_log_term(); },
                      },
                      node_);
}

double log_bell(const LogBell& l, double d) noexcept
{
    const double u = std::log(d) - l.mu;
    return std::exp(-u * u / l.k) / (l.s * d);
}

double CurveSpec::raw(double d) const noexcept
{
    return std::visit(overloaded{
                          [d](const Poly2& p) { return (p.a * d + p.b) * d + p.c; },
                          [d](const ExpDecay& e) { return e.a * std::exp(-e.b * d); },
                          [d](const LogBell& l) { return log_bell(l, d); },
                          [d](const OffsetMinusLogBell& o) { return o.offset - log_bell(o.inner, d); },
                          [d](const Piecewise& p) { return d < p.threshold ? p.low->raw(d) : p.high->raw(d); },
                      },
                      node_);
}

double eval_curve(const CurveSpec& spec, double d)
{
    if (!std::isfinite(d))
        throw DomainError("distance is not finite");
    if (d <= 0.0 && spec.has_log_term())
        throw DomainError("log-normal curve evaluated at d = " + std::to_string(d) + " <= 0");
    return std::clamp(spec.raw(d), 0.0, 1.0);
}

} // namespace v2vlos
