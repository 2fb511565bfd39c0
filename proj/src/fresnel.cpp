#include "v2vlos/fresnel.hpp"

#include "v2vlos/errors.hpp"

#include <cmath>

namespace v2vlos {

double fresnel_clearance_radius(double d1, double d2, double f)
{
    if (!(d1 > 0.0) || !(d2 > 0.0) || !(f > 0.0) || !std::isfinite(d1) || !std::isfinite(d2) || !std::isfinite(f))
        throw DomainError("Fresnel radius needs positive finite distances and frequency");
    const double wavelength = kSpeedOfLight / f;
    return 0.6 * std::sqrt(wavelength * d1 * d2 / (d1 + d2));
}

} // namespace v2vlos
