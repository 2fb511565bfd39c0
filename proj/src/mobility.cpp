#include "v2vlos/mobility.hpp"

#include "v2vlos/errors.hpp"

#include <cmath>
#include <string>

namespace v2vlos {

std::string_view to_string(MobilityKind k) noexcept
{
    switch (k) {
    case MobilityKind::ConstantRelativeSpeed: return "constant";
    case MobilityKind::BoundedRandomWalk: return "random-walk";
    case MobilityKind::OpposingHighway: return "opposing-highway";
    case MobilityKind::SameDirectionHighway: return "same-direction-highway";
    case MobilityKind::UrbanMixed: return "urban-mixed";
    }
    return "?";
}

std::optional<MobilityKind> parse_mobility_kind(std::string_view text) noexcept
{
    for (auto k : {MobilityKind::ConstantRelativeSpeed, MobilityKind::BoundedRandomWalk, MobilityKind::OpposingHighway,
                   MobilityKind::SameDirectionHighway, MobilityKind::UrbanMixed})
        if (text == to_string(k))
            return k;
    return std::nullopt;
}

void MobilityProfile::validate() const
{
    if (!std::isfinite(speed) || !std::isfinite(d0) || !std::isfinite(d_min) || !std::isfinite(d_max))
        throw DomainError("mobility profile values must be finite");
    if (d_min <= 0.0 || d_max <= d_min)
        throw DomainError("mobility range must satisfy 0 < d_min < d_max");
    if (d0 < d_min || d0 > d_max)
        throw DomainError("initial distance " + std::to_string(d0) + " m is outside [" + std::to_string(d_min) + ", " +
                          std::to_string(d_max) + "]");

    auto require = [&](bool ok, const std::string& envelope) {
        if (!ok)
            throw DomainError(std::string(to_string(kind)) + " speed must be " + envelope + " m/s, got " +
                              std::to_string(speed));
    };
    switch (kind) {
    case MobilityKind::ConstantRelativeSpeed: break;
    case MobilityKind::BoundedRandomWalk: require(speed >= 0.0, ">= 0"); break;
    case MobilityKind::OpposingHighway:
        require(speed >= kOpposingMinSpeed && speed <= kOpposingMaxSpeed, "in [50, 100]");
        break;
    case MobilityKind::SameDirectionHighway: require(speed >= 0.0 && speed <= kSameDirectionMaxSpeed, "in [0, 25]"); break;
    case MobilityKind::UrbanMixed: require(speed >= 0.0 && speed <= kUrbanMaxSpeed, "in [0, 20]"); break;
    }
}

double MobilityProfile::max_step() const noexcept
{
    return std::abs(speed);
}

DistanceTrace synth_distance_trace(const MobilityProfile& profile, RngSeed seed)
{
    profile.validate();
    Rng rng(seed);
    std::vector<double> distances;
    distances.reserve(profile.n_steps);

    double d = profile.d0;
    double direction = profile.kind == MobilityKind::OpposingHighway ? -1.0 : 1.0;
    for (std::size_t i = 0; i < profile.n_steps; ++i) {
        distances.push_back(d);

        double delta = 0.0;
        switch (profile.kind) {
        case MobilityKind::ConstantRelativeSpeed: delta = direction * profile.speed; break;
        case MobilityKind::OpposingHighway: delta = direction * rng.uniform(kOpposingMinSpeed, profile.speed); break;
        case MobilityKind::BoundedRandomWalk:
        case MobilityKind::SameDirectionHighway:
        case MobilityKind::UrbanMixed: delta = rng.uniform(-profile.speed, profile.speed); break;
        }

        double next = d + delta;
        if (next < profile.d_min || next > profile.d_max) {
            // Reflection off a bound flips the direction of travel.
            const bool below = next < profile.d_min;
            next = below ? 2.0 * profile.d_min - next : 2.0 * profile.d_max - next;
            while (next < profile.d_min || next > profile.d_max)
                next = next < profile.d_min ? 2.0 * profile.d_min - next : 2.0 * profile.d_max - next;
            direction = below ? 1.0 : -1.0;
        }
        d = next;
    }
    return DistanceTrace::from_distances(distances);
}

} // namespace v2vlos
