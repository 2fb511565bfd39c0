#include "v2vlos/dwell.hpp"
#include "v2vlos/errors.hpp"
#include "v2vlos/estimation.hpp"
#include "v2vlos/fit.hpp"
#include "v2vlos/fresnel.hpp"
#include "v2vlos/markov.hpp"
#include "v2vlos/probability.hpp"
#include "v2vlos/trace_io.hpp"
#include "v2vlos/umi.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace v2vlos;

namespace {

namespace tol {
constexpr double kRowSum = 1e-9;
constexpr double kSweepSeconds = 5.0;
constexpr double kUlp = 4 * std::numeric_limits<double>::epsilon();
constexpr double kSpot = 1e-3;
constexpr double kRecovery = 0.01;
constexpr std::size_t kRecoveryLong = 1000000;
constexpr std::size_t kRecoveryShort = 10000;
constexpr double kRecoverySeconds = 60.0;
constexpr double kUmiDwellLo = 4.0, kUmiDwellHi = 6.0;
constexpr double kModelDwellLo = 13.0, kModelDwellHi = 21.0;
constexpr std::size_t kDwellTraces = 100000;
constexpr double kDwellSeconds = 600.0;
constexpr double kUmi36 = 0.6840, kUmi36Tol = 1e-4;
constexpr double kFresnelLo = 0.9, kFresnelHi = 1.2;
constexpr double kFitSup = 0.01;
constexpr double kPoly2Exact = 1e-9;
constexpr double kNoise = 0.01;
constexpr double kPearsonMin = 0.99;
} // namespace tol

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ScenarioModel> all_models()
{
    std::vector<ScenarioModel> out;
    for (Environment env : kAllEnvironments)
        for (Density density : kAllDensities)
            out.push_back(builtin_model(env, density));
    return out;
}

bool is_distribution(const Distribution& p)
{
    double sum = 0.0;
    for (double x : p) {
        if (!(x >= 0.0 && x <= 1.0))
            return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= tol::kRowSum;
}

std::vector<double> unit_steps(double lo, double hi)
{
    std::vector<double> d;
    for (double x = lo; x <= hi; x += 1.0)
        d.push_back(x);
    return d;
}

std::vector<CurveSpec> explicit_curves(const ScenarioModel& m)
{
    std::vector<CurveSpec> out;
    for (const auto& ec : m.state_probs.explicit_curves())
        out.push_back(ec.curve);
    for (const auto& row : m.rows)
        for (const auto& ec : row.explicit_curves())
            out.push_back(ec.curve);
    return out;
}

std::vector<Point> bin_centre_samples(const CurveSpec& c)
{
    std::vector<Point> pts;
    for (std::size_t b = 0; b < kBinCount; ++b) {
        const double d = DistanceBin{b}.center();
        pts.push_back({d, c.raw(d)});
    }
    return pts;
}

Outcome row_stochastic_sweep()
{
    const auto start = Clock::now();
    std::size_t bad = 0, checked = 0;
    for (const auto& model : all_models())
        for (int d = 1; d <= 500; ++d) {
            const auto tm = transition_matrix(model, d);
            for (const auto& row : tm.m) {
                bad += !is_distribution(row);
                ++checked;
            }
            bad += !is_distribution(state_probabilities(model, d).p);
            ++checked;
        }
    const double t = seconds_since(start);
    std::ostringstream os;
    os << checked << " vectors, " << bad << " invalid, " << t << " s";
    return {bad == 0 && t < tol::kSweepSeconds, os.str()};
}

Outcome spot_values()
{
    const double hh = state_probabilities(builtin_model(Environment::Highway, Density::High), 500.0)[LosState::LOS];
    const auto um = builtin_model(Environment::Urban, Density::Medium);
    const double los100 = state_probabilities(um, 100.0)[LosState::LOS];
    const double ll200 = transition_matrix(um, 200.0)(LosState::LOS, LosState::LOS);
    std::ostringstream os;
    os.precision(17);
    os << "highway-high P_LOS(500)=" << hh << ", urban-medium P_LOS(100)=" << los100
       << ", T_LOS_LOS(200)=" << ll200;
    const bool ok = std::abs(hh - 0.3) <= tol::kUlp && std::abs(los100 - 0.2678) <= tol::kSpot &&
                    std::abs(ll200 - 0.75) <= tol::kSpot;
    return {ok, os.str()};
}

double max_estimate_error(const ScenarioModel& model, double d, std::size_t steps, RngSeed seed)
{
    const auto trace = generate_states(model, DistanceTrace::from_distances(std::vector<double>(steps, d)), seed);
    const auto est = empirical_transition_probs(accumulate({}, trace))[bin_of(d).index];
    const auto tm = transition_matrix(model, d);
    double worst = 0.0;
    for (std::size_t i = 0; i < kStateCount; ++i) {
        if (!est.rows[i])
            continue;
        for (std::size_t j = 0; j < kStateCount; ++j)
            worst = std::max(worst, std::abs((*est.rows[i])[j] - tm.m[i][j]));
    }
    return worst;
}

Outcome estimator_recovery()
{
    constexpr double d = 105.0;
    bool ok = true;
    std::ostringstream os;
    os.precision(3);
    std::uint64_t seed = 1;
    for (const auto& model : all_models()) {
        const auto start = Clock::now();
        const double long_err = max_estimate_error(model, d, tol::kRecoveryLong, RngSeed{seed});
        const double short_err = max_estimate_error(model, d, tol::kRecoveryShort, RngSeed{seed + 1});
        const double t = seconds_since(start);
        seed += 2;
        ok = ok && long_err <= tol::kRecovery && short_err > long_err && t < tol::kRecoverySeconds;
        os << scenario_tag(model.environment, model.density) << " " << long_err << "/" << short_err << "; ";
    }
    return {ok, os.str() + "max error 1e6/1e4 steps at d=105"};
}

Outcome dwell_reproduction()
{
    const auto start = Clock::now();
    const auto model = builtin_model(Environment::Urban, Density::Medium);
    const std::vector<DistanceTrace> traces(tol::kDwellTraces, DistanceTrace::from_distances(unit_steps(1.0, 500.0)));
    const auto umi = summarize_dwell(generate_batch_umi(traces, UmiParams{}, RngSeed{2024}));
    const auto markov = summarize_dwell(generate_batch(model, traces, RngSeed{2025}));
    const double t = seconds_since(start);
    std::ostringstream os;
    os.precision(4);
    os << "UMi " << umi.mean_dwell << " s, model " << markov.mean_dwell << " s over " << traces.size()
       << " traces, " << t << " s";
    const bool ok = umi.mean_dwell >= tol::kUmiDwellLo && umi.mean_dwell <= tol::kUmiDwellHi &&
                    markov.mean_dwell >= tol::kModelDwellLo && markov.mean_dwell <= tol::kModelDwellHi &&
                    t < tol::kDwellSeconds;
    return {ok, os.str()};
}

Outcome umi_closed_form()
{
    bool flat = true;
    for (double d = 0.01; d <= 18.0; d += 0.01)
        flat = flat && umi_los_probability(d) == 1.0;
    flat = flat && umi_los_probability(18.0) == 1.0;
    const double at36 = umi_los_probability(36.0);
    std::ostringstream os;
    os.precision(10);
    os << "d<=18 exactly 1: " << (flat ? "yes" : "no") << ", P(36)=" << at36;
    return {flat && std::abs(at36 - tol::kUmi36) <= tol::kUmi36Tol, os.str()};
}

Outcome fresnel_difference()
{
    const double r2 = fresnel_clearance_radius(250.0, 250.0, 2e9);
    const double r6 = fresnel_clearance_radius(250.0, 250.0, 6e9);
    const double diff = r2 - r6;
    std::ostringstream os;
    os.precision(4);
    os << r2 << " m - " << r6 << " m = " << diff << " m";
    return {diff >= tol::kFresnelLo && diff <= tol::kFresnelHi, os.str()};
}

Outcome fit_round_trip()
{
    double worst = 0.0;
    std::size_t curves = 0;
    for (const auto& model : all_models())
        for (const auto& c : explicit_curves(model)) {
            const auto f = fit_like(c, bin_centre_samples(c));
            for (double d = 10.0; d <= 490.0; d += 0.5)
                worst = std::max(worst, std::abs(eval_curve(f.curve, d) - eval_curve(c, d)));
            ++curves;
        }

    const Poly2 truth{-2.286e-6, 1.443e-3, 0.1022};
    const auto p = fit_poly2(bin_centre_samples(CurveSpec(truth)));
    const double coef = std::max({std::abs(p.curve.a - truth.a), std::abs(p.curve.b - truth.b),
                                  std::abs(p.curve.c - truth.c)});
    std::ostringstream os;
    os << curves << " curves, worst sup gap " << worst << ", Poly2 coefficient error " << coef;
    return {worst <= tol::kFitSup && coef <= tol::kPoly2Exact, os.str()};
}

std::string slurp(const std::filesystem::path& p)
{
    try {
        return read_file(p);
    } catch (const Error&) {
        return {};
    }
}

Outcome cli_determinism(const std::string& tool)
{
    if (tool.empty())
        return {false, "no tool path given"};
    const auto dir = std::filesystem::temp_directory_path();
    const auto a = dir / "v2vlos_acceptance_a.csv";
    const auto b = dir / "v2vlos_acceptance_b.csv";
    const std::string args = " generate --env urban --density medium --profile separate1ms --steps 500 --seed 7 -o ";
    const int ra = std::system(("\"" + tool + "\"" + args + "\"" + a.string() + "\" > /dev/null").c_str());
    const int rb = std::system(("\"" + tool + "\"" + args + "\"" + b.string() + "\" > /dev/null").c_str());
    const std::string ta = slurp(a), tb = slurp(b);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    std::ostringstream os;
    os << "exit " << ra << "/" << rb << ", " << ta.size() << " bytes, identical: " << (ta == tb ? "yes" : "no");
    return {ra == 0 && rb == 0 && !ta.empty() && ta == tb, os.str()};
}

Outcome pearson_and_report()
{
    const auto model = builtin_model(Environment::Urban, Density::Medium);
    const auto& los = model.state_probs.explicit_curves()[0].curve;
    std::mt19937_64 gen(99);
    std::normal_distribution<double> noise(0.0, tol::kNoise);
    std::vector<double> clean, noisy;
    for (std::size_t b = 0; b < kBinCount; ++b) {
        const double y = eval_curve(los, DistanceBin{b}.center());
        clean.push_back(y);
        noisy.push_back(y * (1.0 + noise(gen)));
    }
    const double r = pearson(clean, noisy);

    const std::vector<DistanceTrace> traces(200, DistanceTrace::from_distances(unit_steps(1.0, 500.0)));
    const auto generated = generate_batch(model, traces, RngSeed{5});
    const auto path = std::filesystem::temp_directory_path() / "v2vlos_acceptance_labeled.csv";
    write_labeled_traces(generated, path);
    EmpiricalStats stats;
    for (const auto& t : read_labeled_traces(path))
        stats = accumulate(std::move(stats), t);
    std::filesystem::remove(path);
    const std::string report =
        format_correlation_report(correlate(stats, model, CorrelationMode::PerBinEstimates), "labeled dataset");
    const bool has_rows = report.find("LOS") != std::string::npos && report.find("NLOSb") != std::string::npos &&
                          report.find("NLOSv") != std::string::npos;

    std::ostringstream os;
    os.precision(6);
    os << "r=" << r << ", report " << report.size() << " bytes";
    return {r > tol::kPearsonMin && has_rows, os.str()};
}

} // namespace

int main(int argc, char** argv)
{
    const std::string tool = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"row-stochastic sweep", row_stochastic_sweep},
        {"coefficient spot values", spot_values},
        {"estimator recovery", estimator_recovery},
        {"dwell statistics", dwell_reproduction},
        {"UMi closed form", umi_closed_form},
        {"Fresnel clearance difference", fresnel_difference},
        {"fit round trip", fit_round_trip},
        {"generate determinism", [&] { return cli_determinism(tool); }},
        {"Pearson and report", pearson_and_report},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
                  << "): " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
