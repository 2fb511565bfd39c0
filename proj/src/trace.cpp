#include "v2vlos/trace.hpp"

#include "v2vlos/errors.hpp"

#include <cmath>
#include <string>

namespace v2vlos {

namespace {

constexpr double kSpacingTolerance = 1e-9;

template <class Step>
void check_steps(const std::vector<Step>& steps)
{
    for (std::size_t i = 0; i < steps.size(); ++i) {
        if (!std::isfinite(steps[i].t) || !std::isfinite(steps[i].d))
            throw DomainError("step " + std::to_string(i) + " has a non-finite time or distance");
        if (i > 0 && std::abs(steps[i].t - steps[i - 1].t - kTimeStep) > kSpacingTolerance)
            throw DomainError("step " + std::to_string(i) + ": time must advance by exactly 1 s");
    }
}

} // namespace

DistanceTrace::DistanceTrace(std::vector<DistanceStep> steps) : steps_(std::move(steps))
{
    check_steps(steps_);
}

DistanceTrace DistanceTrace::from_distances(std::span<const double> distances, double t0)
{
    std::vector<DistanceStep> steps;
    steps.reserve(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i)
        steps.push_back({t0 + kTimeStep * static_cast<double>(i), distances[i]});
    return DistanceTrace(std::move(steps));
}

void StateTrace::validate() const
{
    check_steps(steps);
}

DistanceTrace StateTrace::distances() const
{
    std::vector<DistanceStep> out;
    out.reserve(steps.size());
    for (const auto& s : steps)
        out.push_back({s.t, s.d});
    return DistanceTrace(std::move(out));
}

} // namespace v2vlos
