#include "v2vlos/scenario_model.hpp"

#include "v2vlos/errors.hpp"

#include <cmath>
#include <string>

namespace v2vlos {

namespace {

LosState remaining_state(LosState a, LosState b)
{
    if (a == b)
        throw DomainError("explicit curves must target two different states");
    for (LosState s : kAllStates)
        if (s != a && s != b)
            return s;
    return LosState::LOS; // unreachable
}

} // namespace

StateProbModel::StateProbModel(ExplicitCurve first, ExplicitCurve second)
    : curves_{std::move(first), std::move(second)},
      complement_(remaining_state(curves_[0].state, curves_[1].state))
{
}

TransitionRowModel::TransitionRowModel(LosState origin, ExplicitCurve first, ExplicitCurve second)
    : origin_(origin), targets_(std::move(first), std::move(second))
{
}

void ScenarioModel::validate() const
{
    for (std::size_t i = 0; i < kStateCount; ++i)
        if (rows[i].origin() != state_at(i))
            throw DomainError("transition row " + std::to_string(i) + " has origin " +
                              std::string(to_string(rows[i].origin())) + ", expected " +
                              std::string(to_string(state_at(i))));
    if (!std::isfinite(valid_range.d_min) || !std::isfinite(valid_range.d_max) || valid_range.d_min <= 0.0 ||
        valid_range.d_max <= valid_range.d_min)
        throw DomainError("valid range must satisfy 0 < d_min < d_max");
}

double highway_piecewise_threshold(Density density) noexcept
{
    return density == Density::Low ? 70.0 : 90.0;
}

namespace {

using S = LosState;

ExplicitCurve to(LosState s, CurveSpec c)
{
    return ExplicitCurve{s, std::move(c)};
}

// Curve fits for the six scenarios.

ScenarioModel urban(Density density)
{
    struct Coeffs {
        ExpDecay los;
        LogBell nlosv;
        Poly2 los_los, los_nlosb;
        Poly2 nlosb_los, nlosb_nlosb;
        Poly2 nlosv_los, nlosv_nlosb;
    };

    static const Coeffs low{
        {0.8548, 0.0064},
        {0.0396, 5.2718, 3.4827},
        {1.6e-6, -1.2e-3, 0.99},
        {-8.7e-7, 6.7e-4, -0.012},
        {1.6e-6, -1.1e-3, 0.2},
        {-1.2e-6, 9.1e-4, 0.83},
        {-1.4e-6, 6.7e-4, 0.079},
        {-3e-7, 2.7e-4, -0.0059},
    };
    static const Coeffs medium{
        {0.8372, 0.0114},
        {0.0312, 5.0063, 2.4544},
        {1.5e-6, -1.2e-3, 0.93},
        {-5.9e-7, 5.4e-4, 0.0069},
        {1e-6, -7.1e-4, 0.12},
        {-1.1e-6, 7.8e-4, 0.86},
        {8.1e-8, -2.1e-4, 0.14},
        {-4.9e-7, 3.6e-4, -0.0046},
    };
    static const Coeffs high{
        {0.8962, 0.017},
        {0.0242, 5.0115, 2.2092},
        {2.1e-7, -6.5e-4, 0.86},
        {-9e-8, 3e-4, 0.025},
        {7.7e-7, -5.3e-4, 0.083},
        {-9e-7, 6.4e-4, 0.89},
        {6.8e-7, -5.7e-4, 0.14},
        {-4e-7, 2.7e-4, 0.0058},
    };

    const Coeffs& c = density == Density::Low ? low : density == Density::Medium ? medium : high;
    return ScenarioModel{
        Environment::Urban,
        density,
        StateProbModel(to(S::LOS, c.los), to(S::NLOSv, c.nlosv)),
        {
            TransitionRowModel(S::LOS, to(S::LOS, c.los_los), to(S::NLOSb, c.los_nlosb)),
            TransitionRowModel(S::NLOSv, to(S::LOS, c.nlosv_los), to(S::NLOSb, c.nlosv_nlosb)),
            TransitionRowModel(S::NLOSb, to(S::LOS, c.nlosb_los), to(S::NLOSb, c.nlosb_nlosb)),
        },
    };
}

ScenarioModel highway(Density density)
{
    struct Coeffs {
        Poly2 los, nlosb;
        Poly2 los_los, los_nlosb;
        LogBell nlosb_los;
        OffsetMinusLogBell nlosb_nlosb;
        Poly2 nlosv_los_near, nlosv_los_far;
        Poly2 nlosv_nlosb_near, nlosv_nlosb_far;
    };

    static const Coeffs low{
        {1.5e-6, -0.0015, 1},
        {-2.9e-7, 0.00059, 0.0017},
        {6.7e-7, -4.8e-4, 0.99},
        {4e-9, -2.7e-6, 0.018},
        {0.0289, 5.2782, 1.8424},
        {1, {0.0289, 5.2782, 1.8424}},
        {-9.8e-6, 8.9e-4, 0.97},
        {-2e-6, 1.6e-3, 0.051},
        {9.8e-6, -8.9e-4, 0.03},
        {-1.4e-7, 9.1e-5, -0.0016},
    };
    static const Coeffs medium{
        {2.7e-6, -0.0025, 1},
        {-3.7e-7, 0.00061, 0.015},
        {1.6e-6, -1.2e-3, 1},
        {-8.4e-8, 3.5e-5, 0.016},
        {0.0346, 5.021, 1.5875},
        {0.9132, {0.0484, 4.7076, 0.7480}},
        {-4.8e-5, -5.62e-3, 1.11},
        {-2.286e-6, 1.443e-3, 0.1022},
        {4.4e-6, -8.335e-4, 0.042},
        {-2.7e-7, 1.5e-4, -0.0031},
    };
    static const Coeffs high{
        {3.2e-6, -0.003, 1},
        {-4.1e-7, 0.00067, 0},
        {2.1e-6, -1.5e-3, 1},
        {-1.1e-7, 4.3e-5, 0.015},
        {0.0411, 4.927, 1.4876},
        {0.9264, {0.056, 4.7012, 0.8186}},
        {-6.51e-5, -1.04e-3, 0.8706},
        {-1.412e-6, 6.196e-4, 0.2216},
        {1.254e-7, -3.775e-5, 9.853e-3},
        {-1.4e-7, 8.3e-5, -0.0065},
    };

    const Coeffs& c = density == Density::Low ? low : density == Density::Medium ? medium : high;
    const double d_t = highway_piecewise_threshold(density);
    return ScenarioModel{
        Environment::Highway,
        density,
        StateProbModel(to(S::LOS, c.los), to(S::NLOSb, c.nlosb)),
        {
            TransitionRowModel(S::LOS, to(S::LOS, c.los_los), to(S::NLOSb, c.los_nlosb)),
            TransitionRowModel(S::NLOSv, to(S::LOS, CurveSpec::piecewise(d_t, c.nlosv_los_near, c.nlosv_los_far)),
                               to(S::NLOSb, CurveSpec::piecewise(d_t, c.nlosv_nlosb_near, c.nlosv_nlosb_far))),
            TransitionRowModel(S::NLOSb, to(S::LOS, c.nlosb_los), to(S::NLOSb, c.nlosb_nlosb)),
        },
    };
}

} // namespace

ScenarioModel builtin_model(Environment env, Density density)
{
    return env == Environment::Urban ? urban(density) : highway(density);
}

ResolvedDistance resolve_distance(const ScenarioModel& model, double d)
{
    if (!std::isfinite(d))
        throw DomainError("distance is not finite");
    if (d <= 0.0)
        throw DomainError("distance must be positive, got " + std::to_string(d));
    if (d < model.valid_range.d_min)
        return {model.valid_range.d_min, true};
    if (d > model.valid_range.d_max) {
        if (model.above_range == AboveRangePolicy::Error)
            throw DomainError("distance " + std::to_string(d) + " m exceeds model range " +
                              std::to_string(model.valid_range.d_max) + " m");
        return {model.valid_range.d_max, true};
    }
    return {d, false};
}

} // namespace v2vlos
