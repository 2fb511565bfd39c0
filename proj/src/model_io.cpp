#include "v2vlos/model_io.hpp"

#include "v2vlos/errors.hpp"
#include "v2vlos/trace_io.hpp"

#include <json.hpp>

#include <initializer_list>
#include <set>

namespace v2vlos {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormatTag = "v2vlos-scenario/1";

Json curve_to_json(const CurveSpec& c)
{
    Json j;
    if (const auto* p = c.get_if<Poly2>()) {
        j["family"] = "poly2";
        j["a"] = p->a;
        j["b"] = p->b;
        j["c"] = p->c;
    } else if (const auto* e = c.get_if<ExpDecay>()) {
        j["family"] = "exp_decay";
        j["a"] = e->a;
        j["b"] = e->b;
    } else if (const auto* l = c.get_if<LogBell>()) {
        j["family"] = "log_bell";
        j["s"] = l->s;
        j["mu"] = l->mu;
        j["k"] = l->k;
    } else if (const auto* o = c.get_if<OffsetMinusLogBell>()) {
        j["family"] = "offset_minus_log_bell";
        j["offset"] = o->offset;
        j["inner"] = curve_to_json(CurveSpec(o->inner));
    } else if (const auto* pw = c.get_if<Piecewise>()) {
        j["family"] = "piecewise";
        j["d_T"] = pw->threshold;
        j["low"] = curve_to_json(*pw->low);
        j["high"] = curve_to_json(*pw->high);
    }
    return j;
}

Json explicit_to_json(const std::array<ExplicitCurve, 2>& curves)
{
    Json arr = Json::array();
    for (const auto& ec : curves) {
        Json e;
        e["state"] = std::string(to_string(ec.state));
        e["curve"] = curve_to_json(ec.curve);
        arr.push_back(std::move(e));
    }
    return arr;
}

// Strict readers. Paths are carried for diagnostics.

void expect_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!j.is_object())
        throw ParseError(path + ": expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ParseError(path + ": unknown key '" + key + "'");
    for (const char* key : keys)
        if (!j.contains(key))
            throw ParseError(path + ": missing key '" + key + "'");
}

double number(const Json& j, const std::string& path, const char* key)
{
    const Json& v = j.at(key);
    if (!v.is_number())
        throw ParseError(path + "." + key + ": expected a number");
    return v.get<double>();
}

std::string text(const Json& j, const std::string& path, const char* key)
{
    const Json& v = j.at(key);
    if (!v.is_string())
        throw ParseError(path + "." + key + ": expected a string");
    return v.get<std::string>();
}

LosState state_field(const Json& j, const std::string& path, const char* key)
{
    const std::string s = text(j, path, key);
    auto st = parse_state(s);
    if (!st)
        throw ParseError(path + "." + key + ": unknown state '" + s + "'");
    return *st;
}

LogBell log_bell_from_json(const Json& j, const std::string& path)
{
    expect_keys(j, path, {"family", "s", "mu", "k"});
    if (text(j, path, "family") != "log_bell")
        throw ParseError(path + ": expected family 'log_bell'");
    return LogBell{number(j, path, "s"), number(j, path, "mu"), number(j, path, "k")};
}

CurveSpec curve_from_json(const Json& j, const std::string& path)
{
    if (!j.is_object() || !j.contains("family"))
        throw ParseError(path + ": curve needs a 'family'");
    const std::string family = text(j, path, "family");
    try {
        if (family == "poly2") {
            expect_keys(j, path, {"family", "a", "b", "c"});
            return Poly2{number(j, path, "a"), number(j, path, "b"), number(j, path, "c")};
        }
        if (family == "exp_decay") {
            expect_keys(j, path, {"family", "a", "b"});
            return ExpDecay{number(j, path, "a"), number(j, path, "b")};
        }
        if (family == "log_bell")
            return log_bell_from_json(j, path);
        if (family == "offset_minus_log_bell") {
            expect_keys(j, path, {"family", "offset", "inner"});
            return OffsetMinusLogBell{number(j, path, "offset"), log_bell_from_json(j.at("inner"), path + ".inner")};
        }
        if (family == "piecewise") {
            expect_keys(j, path, {"family", "d_T", "low", "high"});
            return CurveSpec::piecewise(number(j, path, "d_T"), curve_from_json(j.at("low"), path + ".low"),
                                        curve_from_json(j.at("high"), path + ".high"));
        }
    } catch (const DomainError& e) {
        throw ParseError(path + ": " + e.what());
    }
    throw ParseError(path + ": unknown curve family '" + family + "'");
}

StateProbModel prob_model_from_json(const Json& j, const std::string& path, std::initializer_list<const char*> keys)
{
    expect_keys(j, path, keys);
    const Json& arr = j.at("explicit");
    if (!arr.is_array() || arr.size() != 2)
        throw ParseError(path + ".explicit: expected exactly two curves");
    std::vector<ExplicitCurve> curves;
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string p = path + ".explicit[" + std::to_string(i) + "]";
        expect_keys(arr[i], p, {"state", "curve"});
        curves.push_back({state_field(arr[i], p, "state"), curve_from_json(arr[i].at("curve"), p + ".curve")});
    }
    try {
        StateProbModel m(curves[0], curves[1]);
        if (m.complement_state() != state_field(j, path, "complement"))
            throw ParseError(path + ".complement: must be the state without an explicit curve");
        return m;
    } catch (const DomainError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace

std::string to_parameter_text(const ScenarioModel& model)
{
    Json j;
    j["format"] = kFormatTag;
    j["environment"] = std::string(to_string(model.environment));
    j["density"] = std::string(to_string(model.density));
    j["valid_range"] = Json{{"d_min", model.valid_range.d_min}, {"d_max", model.valid_range.d_max}};
    j["above_range"] = model.above_range == AboveRangePolicy::Error ? "error" : "clamp";
    j["repair"] = model.repair == RepairPolicy::KeepLargest ? "keep_largest" : "keep_first";
    j["state_probabilities"] = Json{{"explicit", explicit_to_json(model.state_probs.explicit_curves())},
                                    {"complement", std::string(to_string(model.state_probs.complement_state()))}};
    Json rows = Json::array();
    for (const auto& row : model.rows)
        rows.push_back(Json{{"origin", std::string(to_string(row.origin()))},
                            {"explicit", explicit_to_json(row.explicit_curves())},
                            {"complement", std::string(to_string(row.complement_target()))}});
    j["transitions"] = std::move(rows);
    return j.dump(2) + "\n";
}

ScenarioModel parse_parameter_text(std::string_view input)
{
    Json j;
    try {
        j = Json::parse(input.begin(), input.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const std::string root = "$";
    expect_keys(j, root,
                {"format", "environment", "density", "valid_range", "above_range", "repair", "state_probabilities",
                 "transitions"});
    if (text(j, root, "format") != kFormatTag)
        throw ParseError("$.format: expected '" + std::string(kFormatTag) + "'");

    const std::string env_text = text(j, root, "environment");
    auto env = parse_environment(env_text);
    if (!env)
        throw ParseError("$.environment: unknown environment '" + env_text + "'");
    const std::string density_text = text(j, root, "density");
    auto density = parse_density(density_text);
    if (!density)
        throw ParseError("$.density: unknown density '" + density_text + "'");

    const Json& range = j.at("valid_range");
    expect_keys(range, "$.valid_range", {"d_min", "d_max"});

    const std::string above = text(j, root, "above_range");
    if (above != "error" && above != "clamp")
        throw ParseError("$.above_range: expected 'error' or 'clamp'");
    const std::string repair = text(j, root, "repair");
    if (repair != "keep_largest" && repair != "keep_first")
        throw ParseError("$.repair: expected 'keep_largest' or 'keep_first'");

    StateProbModel probs = prob_model_from_json(j.at("state_probabilities"), "$.state_probabilities",
                                                {"explicit", "complement"});

    const Json& rows = j.at("transitions");
    if (!rows.is_array() || rows.size() != kStateCount)
        throw ParseError("$.transitions: expected three rows");
    std::vector<TransitionRowModel> parsed;
    for (std::size_t i = 0; i < kStateCount; ++i) {
        const std::string p = "$.transitions[" + std::to_string(i) + "]";
        const LosState origin = state_field(rows[i], p, "origin");
        StateProbModel targets = prob_model_from_json(rows[i], p, {"origin", "explicit", "complement"});
        parsed.emplace_back(origin, targets.explicit_curves()[0], targets.explicit_curves()[1]);
    }

    ScenarioModel model{
        *env,
        *density,
        std::move(probs),
        {parsed[0], parsed[1], parsed[2]},
        DistanceRange{number(range, "$.valid_range", "d_min"), number(range, "$.valid_range", "d_max")},
        above == "error" ? AboveRangePolicy::Error : AboveRangePolicy::Clamp,
        repair == "keep_largest" ? RepairPolicy::KeepLargest : RepairPolicy::KeepFirst,
    };
    try {
        model.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return model;
}

ScenarioModel load_parameter_file(const std::filesystem::path& path)
{
    return parse_parameter_text(read_file(path));
}

void save_parameter_file(const ScenarioModel& model, const std::filesystem::path& path)
{
    write_file_atomic(path, to_parameter_text(model));
}

std::string builtin_file_name(Environment env, Density density)
{
    return std::string(to_string(env)) + "_" + std::string(to_string(density)) + ".json";
}

} // namespace v2vlos
