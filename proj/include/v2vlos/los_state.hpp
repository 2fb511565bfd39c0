#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace v2vlos {

/// Visibility state of a V2V link. The enumerator order is the matrix index
/// order used everywhere (LOS, NLOSv, NLOSb).
enum class LosState : std::size_t { LOS = 0, NLOSv = 1, NLOSb = 2 };

enum class Environment { Urban, Highway };

enum class Density { Low, Medium, High };

inline constexpr std::size_t kStateCount = 3;

inline constexpr std::array<LosState, kStateCount> kAllStates{LosState::LOS, LosState::NLOSv,
                                                               LosState::NLOSb};

inline constexpr std::array<Environment, 2> kAllEnvironments{Environment::Urban, Environment::Highway};
inline constexpr std::array<Density, 3> kAllDensities{Density::Low, Density::Medium, Density::High};

constexpr std::size_t index_of(LosState s) noexcept { return static_cast<std::size_t>(s); }

constexpr LosState state_at(std::size_t i) noexcept { return static_cast<LosState>(i); }

std::string_view to_string(LosState s) noexcept;
std::string_view to_string(Environment e) noexcept;
std::string_view to_string(Density d) noexcept;

/// Accepts the canonical spelling ("LOS", "NLOSv", "NLOSb"), case-insensitively.
std::optional<LosState> parse_state(std::string_view text) noexcept;
std::optional<Environment> parse_environment(std::string_view text) noexcept;
std::optional<Density> parse_density(std::string_view text) noexcept;

/// "urban-medium", "highway-low", ...
std::string scenario_tag(Environment e, Density d);

} // namespace v2vlos
