#pragma once

#include "v2vlos/los_state.hpp"
#include "v2vlos/trace.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace v2vlos {

/// PL(d) = intercept + 10 * exponent * log10(d), intercept at 1 m.
struct LogDistance {
    double intercept_db = 0.0;
    double exponent = 2.0;

    friend bool operator==(const LogDistance&, const LogDistance&) = default;
};

/// Per-state path-loss parameters. The defaults are illustrative only: they
/// reproduce a plausible LOS < NLOSv < NLOSb separation and are not measured
/// values.
struct PathLossParams {
    LogDistance los{38.47, 1.9};
    LogDistance nlosb{38.47, 2.9};
    /// NLOSv is free-space loss plus this constant.
    double nlosv_extra_db = 8.0;
    double carrier_hz = 2e9;

    void validate() const;

    friend bool operator==(const PathLossParams&, const PathLossParams&) = default;
};

/// Friis free-space loss in dB: 20 log10(d) + 20 log10(f) - 147.55.
/// DomainError for d < 1 or f <= 0.
double free_space_pl(double d, double f);

/// LOS and NLOSb follow their log-distance curves, NLOSv is free space plus
/// nlosv_extra_db. No shadow fading is applied; a shadowing term would be
/// added to the returned value by the caller.
double state_path_loss(LosState state, double d, const PathLossParams& p);

struct PathLossSample {
    double t = 0.0;
    double d = 0.0;
    LosState state = LosState::LOS;
    double pl_db = 0.0;

    friend bool operator==(const PathLossSample&, const PathLossSample&) = default;
};

std::vector<PathLossSample> render_path_loss(const StateTrace& trace, const PathLossParams& p);

/// Smallest grid distance d* in [d_lo, d_hi] from which LOS < NLOSv < NLOSb
/// holds at every later grid point, or nullopt if the ordering fails at d_hi.
std::optional<double> ordering_crossover(const PathLossParams& p, double d_lo = 1.0, double d_hi = 500.0,
                                         double step = 0.01);

/// Delimited text "t,d,state,pl_db".
std::string format_path_loss_csv(const std::vector<PathLossSample>& series);

/// JSON {"los": {"intercept_db", "exponent"}, "nlosb": {...}, "nlosv_extra_db",
/// "carrier_hz"}; missing keys keep their defaults, unknown keys are rejected.
PathLossParams parse_path_loss_params(const std::string& text);
PathLossParams load_path_loss_params(const std::filesystem::path& path);
std::string to_path_loss_text(const PathLossParams& p);

} // namespace v2vlos
