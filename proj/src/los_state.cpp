#include "v2vlos/los_state.hpp"

#include <algorithm>
#include <cctype>

namespace v2vlos {

namespace {

bool iequals(std::string_view a, std::string_view b) noexcept
{
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

} // namespace

std::string_view to_string(LosState s) noexcept
{
    switch (s) {
    case LosState::LOS: return "LOS";
    case LosState::NLOSv: return "NLOSv";
    case LosState::NLOSb: return "NLOSb";
    }
    return "?";
}

std::string_view to_string(Environment e) noexcept
{
    return e == Environment::Urban ? "urban" : "highway";
}

std::string_view to_string(Density d) noexcept
{
    switch (d) {
    case Density::Low: return "low";
    case Density::Medium: return "medium";
    case Density::High: return "high";
    }
    return "?";
}

std::optional<LosState> parse_state(std::string_view text) noexcept
{
    for (LosState s : kAllStates)
        if (iequals(text, to_string(s)))
            return s;
    return std::nullopt;
}

std::optional<Environment> parse_environment(std::string_view text) noexcept
{
    for (Environment e : kAllEnvironments)
        if (iequals(text, to_string(e)))
            return e;
    return std::nullopt;
}

std::optional<Density> parse_density(std::string_view text) noexcept
{
    for (Density d : kAllDensities)
        if (iequals(text, to_string(d)))
            return d;
    return std::nullopt;
}

std::string scenario_tag(Environment e, Density d)
{
    std::string tag(to_string(e));
    tag += '-';
    tag += to_string(d);
    return tag;
}

} // namespace v2vlos
