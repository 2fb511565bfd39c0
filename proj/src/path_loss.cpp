#include "v2vlos/path_loss.hpp"

#include "v2vlos/errors.hpp"
#include "v2vlos/trace_io.hpp"

#include <json.hpp>

#include <cmath>
#include <set>
#include <string>

namespace v2vlos {

namespace {

// 20 log10(4 pi / c)
constexpr double kFriisConstantDb = 147.55;

double log_distance(const LogDistance& m, double d)
{
    return m.intercept_db + 10.0 * m.exponent * std::log10(d);
}

void require_distance(double d)
{
    if (!std::isfinite(d) || d < 1.0)
        throw DomainError("path loss needs d >= 1 m, got " + std::to_string(d));
}

} // namespace

void PathLossParams::validate() const
{
    for (const LogDistance* m : {&los, &nlosb})
        if (!std::isfinite(m->intercept_db) || !std::isfinite(m->exponent) || m->exponent <= 0.0)
            throw DomainError("log-distance exponent must be positive and finite");
    if (!std::isfinite(nlosv_extra_db) || nlosv_extra_db < 0.0)
        throw DomainError("NLOSv extra attenuation must be >= 0 dB");
    if (!std::isfinite(carrier_hz) || carrier_hz <= 0.0)
        throw DomainError("carrier frequency must be positive");
}

double free_space_pl(double d, double f)
{
    require_distance(d);
    if (!std::isfinite(f) || f <= 0.0)
        throw DomainError("carrier frequency must be positive");
    return 20.0 * std::log10(d) + 20.0 * std::log10(f) - kFriisConstantDb;
}

double state_path_loss(LosState state, double d, const PathLossParams& p)
{
    require_distance(d);
    switch (state) {
    case LosState::LOS: return log_distance(p.los, d);
    case LosState::NLOSb: return log_distance(p.nlosb, d);
    case LosState::NLOSv: return free_space_pl(d, p.carrier_hz) + p.nlosv_extra_db;
    }
    return 0.0;
}

std::vector<PathLossSample> render_path_loss(const StateTrace& trace, const PathLossParams& p)
{
    p.validate();
    std::vector<PathLossSample> out;
    out.reserve(trace.size());
    for (const auto& s : trace.steps)
        out.push_back({s.t, s.d, s.state, state_path_loss(s.state, s.d, p)});
    return out;
}

std::optional<double> ordering_crossover(const PathLossParams& p, double d_lo, double d_hi, double step)
{
    auto ordered = [&](double d) {
        const double los = state_path_loss(LosState::LOS, d, p);
        const double nlosv = state_path_loss(LosState::NLOSv, d, p);
        const double nlosb = state_path_loss(LosState::NLOSb, d, p);
        return los < nlosv && nlosv < nlosb;
    };
    const auto n = static_cast<std::size_t>(std::floor((d_hi - d_lo) / step + 1e-9));
    std::optional<double> crossover;
    for (std::size_t i = 0; i <= n; ++i) {
        const double d = d_lo + step * static_cast<double>(i);
        if (!ordered(d))
            crossover.reset();
        else if (!crossover)
            crossover = d;
    }
    return crossover;
}

std::string format_path_loss_csv(const std::vector<PathLossSample>& series)
{
    std::string out = "t,d,state,pl_db\n";
    for (const auto& s : series) {
        out += format_double(s.t);
        out += ',';
        out += format_double(s.d);
        out += ',';
        out += to_string(s.state);
        out += ',';
        out += format_double(s.pl_db);
        out += '\n';
    }
    return out;
}

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& j, std::initializer_list<const char*> keys, const std::string& where)
{
    if (!j.is_object())
        throw ParseError(where + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ParseError(where + ": unknown key '" + key + "'");
}

void read_number(const Json& j, const char* key, double& target, const std::string& where)
{
    if (!j.contains(key))
        return;
    if (!j.at(key).is_number())
        throw ParseError(where + "." + key + ": expected a number");
    target = j.at(key).get<double>();
}

void read_log_distance(const Json& j, const char* key, LogDistance& target)
{
    if (!j.contains(key))
        return;
    const std::string where = std::string("$.") + key;
    reject_unknown(j.at(key), {"intercept_db", "exponent"}, where);
    read_number(j.at(key), "intercept_db", target.intercept_db, where);
    read_number(j.at(key), "exponent", target.exponent, where);
}

} // namespace

PathLossParams parse_path_loss_params(const std::string& text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(j, {"los", "nlosb", "nlosv_extra_db", "carrier_hz"}, "$");
    PathLossParams p;
    read_log_distance(j, "los", p.los);
    read_log_distance(j, "nlosb", p.nlosb);
    read_number(j, "nlosv_extra_db", p.nlosv_extra_db, "$");
    read_number(j, "carrier_hz", p.carrier_hz, "$");
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return p;
}

PathLossParams load_path_loss_params(const std::filesystem::path& path)
{
    return parse_path_loss_params(read_file(path));
}

std::string to_path_loss_text(const PathLossParams& p)
{
    Json j;
    j["los"] = Json{{"intercept_db", p.los.intercept_db}, {"exponent", p.los.exponent}};
    j["nlosb"] = Json{{"intercept_db", p.nlosb.intercept_db}, {"exponent", p.nlosb.exponent}};
    j["nlosv_extra_db"] = p.nlosv_extra_db;
    j["carrier_hz"] = p.carrier_hz;
    return j.dump(2) + "\n";
}

} // namespace v2vlos
