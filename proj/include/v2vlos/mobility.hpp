#pragma once

#include "v2vlos/rng.hpp"
#include "v2vlos/trace.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace v2vlos {

enum class MobilityKind {
    ConstantRelativeSpeed, ///< d changes by `speed` every second, any sign
    BoundedRandomWalk,     ///< per-step change uniform in [-speed, speed]
    OpposingHighway,       ///< approach then recede at a speed uniform in [50, speed]
    SameDirectionHighway,  ///< per-step change uniform in [-speed, speed], speed <= 25
    UrbanMixed,            ///< per-step change uniform in [-speed, speed], speed <= 20
};

std::string_view to_string(MobilityKind k) noexcept;
std::optional<MobilityKind> parse_mobility_kind(std::string_view text) noexcept;

/// Relative-speed limits observed for V2V pairs, in m/s.
inline constexpr double kSameDirectionMaxSpeed = 25.0;
inline constexpr double kUrbanMaxSpeed = 20.0;
inline constexpr double kOpposingMinSpeed = 50.0;
inline constexpr double kOpposingMaxSpeed = 100.0;

struct MobilityProfile {
    MobilityKind kind = MobilityKind::ConstantRelativeSpeed;
    double speed = 1.0; ///< m/s; meaning per kind above
    double d0 = 1.0;
    std::size_t n_steps = 500;
    double d_min = 1.0;
    double d_max = 500.0;

    /// DomainError when the speed is outside the kind's envelope or d0 is
    /// outside [d_min, d_max].
    void validate() const;

    /// Largest |d(t+1) - d(t)| the profile can produce.
    double max_step() const noexcept;
};

/// Distances are reflected at d_min / d_max; a reflection also reverses the
/// direction of deterministic kinds.
DistanceTrace synth_distance_trace(const MobilityProfile& profile, RngSeed seed);

} // namespace v2vlos
