#pragma once

namespace v2vlos {

inline constexpr double kSpeedOfLight = 299792458.0;

/// 60 % of the first Fresnel zone radius at distances d1, d2 from the two
/// ends: 0.6 * sqrt(lambda d1 d2 / (d1 + d2)). DomainError on nonpositive input.
double fresnel_clearance_radius(double d1, double d2, double f);

} // namespace v2vlos
