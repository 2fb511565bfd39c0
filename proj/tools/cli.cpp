#include "cli.hpp"

#include "v2vlos/curve_table.hpp"
#include "v2vlos/dwell.hpp"
#include "v2vlos/errors.hpp"
#include "v2vlos/estimation.hpp"
#include "v2vlos/fit.hpp"
#include "v2vlos/markov.hpp"
#include "v2vlos/mobility.hpp"
#include "v2vlos/model_io.hpp"
#include "v2vlos/path_loss.hpp"
#include "v2vlos/trace_io.hpp"
#include "v2vlos/umi.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef V2VLOS_VERSION
#define V2VLOS_VERSION "unknown"
#endif

namespace v2vlos::cli {
namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Salt separating mobility streams from chain streams under one --seed.
constexpr std::uint64_t kMobilitySalt = 0x6d6f62696c697479ULL;

struct ScenarioOptions {
    std::string env;
    std::string density;
    std::string model_path;
    std::string above_range;
};

struct DistanceOptions {
    std::string input;
    std::string profile = "separate1ms";
    std::size_t steps = 500;
    std::size_t traces = 1;
    std::optional<double> d0;
    std::optional<double> speed;
};

struct Common {
    std::uint64_t seed = 1;
    std::string output;
    unsigned threads = 0;
};

struct Options {
    ScenarioOptions scenario;
    DistanceOptions distance;
    Common common;
    // curves
    double d_lo = 1.0;
    double d_hi = 500.0;
    double d_step = 1.0;
    // compare
    std::string pathloss;
    double umi_d1 = 18.0;
    double umi_d2 = 36.0;
    // estimate
    std::string reference;
    std::string fit_output;
    std::string report_output;
    std::string correlation_mode = "per-bin";
};

void add_scenario(CLI::App* sub, ScenarioOptions& o)
{
    sub->add_option("--env", o.env, "Environment")->check(CLI::IsMember({"urban", "highway"}, CLI::ignore_case));
    sub->add_option("--density", o.density, "Traffic density")
        ->check(CLI::IsMember({"low", "medium", "high"}, CLI::ignore_case));
    sub->add_option("--model", o.model_path, "Parameter file used instead of the builtin scenario")
        ->check(CLI::ExistingFile);
    sub->add_option("--above-range", o.above_range, "Policy for distances above the valid range")
        ->check(CLI::IsMember({"error", "clamp"}, CLI::ignore_case));
}

void add_distance(CLI::App* sub, DistanceOptions& o)
{
    sub->add_option("--input", o.input, "Distance trace file (t,d)")->check(CLI::ExistingFile);
    sub->add_option("--profile", o.profile, "Synthetic mobility profile")
        ->check(CLI::IsMember({"separate1ms", "constant", "random-walk", "opposing-highway", "same-direction-highway",
                               "urban-mixed"}));
    sub->add_option("--steps", o.steps, "Steps per synthetic trace")->check(CLI::PositiveNumber);
    sub->add_option("--traces", o.traces, "Number of synthetic traces")->check(CLI::PositiveNumber);
    sub->add_option("--d0", o.d0, "Initial distance in m");
    sub->add_option("--speed", o.speed, "Relative speed in m/s");
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--output,-o", c.output, "Output file (default stdout)");
    sub->add_option("--threads", c.threads, "Worker threads for batches (0 = hardware)");
}

ScenarioModel resolve_model(const ScenarioOptions& o)
{
    ScenarioModel model = [&] {
        if (!o.model_path.empty())
            return load_parameter_file(o.model_path);
        if (o.env.empty() || o.density.empty())
            throw UsageError("--env and --density are required unless --model is given");
        return builtin_model(*parse_environment(o.env), *parse_density(o.density));
    }();
    if (!o.above_range.empty())
        model.above_range = o.above_range == "clamp" ? AboveRangePolicy::Clamp : AboveRangePolicy::Error;
    return model;
}

std::string scenario_label(const ScenarioModel& m)
{
    return scenario_tag(m.environment, m.density);
}

MobilityProfile build_profile(const DistanceOptions& o)
{
    MobilityProfile p;
    p.n_steps = o.steps;
    if (o.profile == "separate1ms" || o.profile == "constant") {
        p.kind = MobilityKind::ConstantRelativeSpeed;
        p.speed = 1.0;
        p.d0 = 1.0;
    } else {
        p.kind = *parse_mobility_kind(o.profile);
        p.d0 = 250.0;
        switch (p.kind) {
        case MobilityKind::OpposingHighway:
            p.speed = 75.0;
            p.d0 = 500.0;
            break;
        case MobilityKind::SameDirectionHighway:
            p.speed = kSameDirectionMaxSpeed;
            break;
        default:
            p.speed = kUrbanMaxSpeed;
            break;
        }
    }
    if (o.speed)
        p.speed = *o.speed;
    if (o.d0)
        p.d0 = *o.d0;
    p.validate();
    return p;
}

std::vector<DistanceTrace> distance_traces(const DistanceOptions& o, std::uint64_t seed)
{
    if (!o.input.empty()) {
        if (o.traces != 1)
            throw UsageError("--traces applies to synthetic profiles only");
        return {read_distance_trace(o.input)};
    }
    const MobilityProfile profile = build_profile(o);
    std::vector<DistanceTrace> out;
    out.reserve(o.traces);
    for (std::size_t i = 0; i < o.traces; ++i)
        out.push_back(synth_distance_trace(profile, sub_seed(RngSeed{seed ^ kMobilitySalt}, i)));
    return out;
}

std::string version_line()
{
    return "# v2vlos " V2VLOS_VERSION "\n";
}

std::string provenance(const std::string& scenario, std::uint64_t seed)
{
    return version_line() + "# scenario=" + scenario + "\n# seed=" + std::to_string(seed) + "\n";
}

struct Sink {
    std::ostream& out;
    std::ostream& err;
    const std::string& output;

    void data(const std::string& text) const
    {
        if (output.empty() || output == "-")
            out << text;
        else
            write_file_atomic(output, text);
    }

    std::ostream& summary() const { return output.empty() || output == "-" ? err : out; }
};

std::string format_traces(std::vector<StateTrace> traces, std::uint64_t seed)
{
    if (traces.size() == 1)
        return version_line() + format_state_trace(traces.front());
    for (auto& t : traces)
        t.seed = RngSeed{seed};
    return version_line() + format_labeled_traces(traces);
}

int cmd_generate(const Options& o, const Sink& sink)
{
    const ScenarioModel model = resolve_model(o.scenario);
    const auto distances = distance_traces(o.distance, o.common.seed);
    std::vector<StateTrace> traces =
        distances.size() == 1
            ? std::vector<StateTrace>{generate_states(model, distances.front(), RngSeed{o.common.seed})}
            : generate_batch(model, distances, RngSeed{o.common.seed}, BatchOptions{o.common.threads});

    const DwellSummary summary = summarize_dwell(traces);
    sink.data(format_traces(std::move(traces), o.common.seed));
    sink.summary() << format_dwell_report(summary, scenario_label(model));
    return kExitOk;
}

int cmd_curves(const Options& o, const Sink& sink)
{
    const ScenarioModel model = resolve_model(o.scenario);
    const CurveTable table = sample_curves(model, o.d_lo, o.d_hi, o.d_step);
    sink.data(provenance(scenario_label(model), o.common.seed) + format_curve_table(table));
    return kExitOk;
}

int cmd_compare(const Options& o, const Sink& sink)
{
    const ScenarioModel model = resolve_model(o.scenario);
    PathLossParams pl;
    if (!o.pathloss.empty())
        pl = load_path_loss_params(o.pathloss);
    const UmiParams umi{o.umi_d1, o.umi_d2};
    umi.validate();

    const auto distances = distance_traces(o.distance, o.common.seed);
    const RngSeed seed{o.common.seed};
    const BatchOptions batch{o.common.threads};
    const auto proposed = generate_batch(model, distances, seed, batch);
    const auto baseline = generate_batch_umi(distances, umi, seed);

    const bool multi = distances.size() > 1;
    std::string text = provenance(scenario_label(model), o.common.seed);
    text += multi ? "link,t,d,state,pl_db,umi_state,umi_pl_db\n" : "t,d,state,pl_db,umi_state,umi_pl_db\n";
    for (std::size_t i = 0; i < distances.size(); ++i) {
        const auto a = render_path_loss(proposed[i], pl);
        const auto b = render_path_loss(baseline[i], pl);
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (multi)
                text += std::to_string(i) + ",";
            text += format_double(a[k].t) + "," + format_double(a[k].d) + "," + std::string(to_string(a[k].state)) +
                    "," + format_double(a[k].pl_db) + "," + std::string(to_string(b[k].state)) + "," +
                    format_double(b[k].pl_db) + "\n";
        }
    }
    sink.data(text);
    sink.summary() << format_dwell_report(summarize_dwell(proposed), scenario_label(model))
                   << format_dwell_report(summarize_dwell(baseline), "umi");
    return kExitOk;
}

ScenarioModel estimate_reference(const Options& o, const std::vector<StateTrace>& traces)
{
    if (!o.reference.empty())
        return load_parameter_file(o.reference);
    if (!o.scenario.model_path.empty() || (!o.scenario.env.empty() && !o.scenario.density.empty()))
        return resolve_model(o.scenario);
    const std::string& tag = traces.front().scenario;
    const auto dash = tag.find('-');
    if (dash != std::string::npos) {
        const auto env = parse_environment(tag.substr(0, dash));
        const auto density = parse_density(tag.substr(dash + 1));
        if (env && density)
            return builtin_model(*env, *density);
    }
    throw UsageError("no reference model: pass --reference, --model or --env/--density");
}

int cmd_estimate(const Options& o, const Sink& sink)
{
    if (o.distance.input.empty())
        throw UsageError("estimate needs --input");
    const auto traces = read_labeled_traces(o.distance.input);
    if (traces.empty())
        throw DomainError("input holds no traces");
    const ScenarioModel reference = estimate_reference(o, traces);

    EmpiricalStats stats;
    for (const auto& t : traces)
        stats = accumulate(std::move(stats), t);
    const std::string label = scenario_label(reference);
    sink.data(provenance(label, o.common.seed) + format_stats_csv(stats));

    if (!o.fit_output.empty()) {
        const ModelFit fit = fit_scenario(stats, reference);
        for (const auto& f : fit.fallbacks)
            sink.err << "warning: kept reference curve for " << f << "\n";
        save_parameter_file(fit.model, o.fit_output);
    }

    const CorrelationMode mode =
        o.correlation_mode == "fitted" ? CorrelationMode::FittedCurves : CorrelationMode::PerBinEstimates;
    const std::string report =
        provenance(label, o.common.seed) + format_correlation_report(correlate(stats, reference, mode), label);
    if (o.report_output.empty())
        sink.summary() << report;
    else
        write_file_atomic(o.report_output, report);
    return kExitOk;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Distance-dependent V2V LOS state generator", "v2vlos"};
    app.set_version_flag("--version", V2VLOS_VERSION);
    app.set_config("--config", "", "Configuration file; flags override its values");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);

    Options o;

    auto* gen = app.add_subcommand("generate", "Generate LOS state traces");
    add_scenario(gen, o.scenario);
    add_distance(gen, o.distance);
    add_common(gen, o.common);

    auto* curves = app.add_subcommand("curves", "Sample state and transition probability curves");
    add_scenario(curves, o.scenario);
    add_common(curves, o.common);
    curves->add_option("--d-lo", o.d_lo, "First distance")->check(CLI::PositiveNumber);
    curves->add_option("--d-hi", o.d_hi, "Last distance")->check(CLI::PositiveNumber);
    curves->add_option("--step", o.d_step, "Distance step")->check(CLI::PositiveNumber);

    auto* compare = app.add_subcommand("compare", "Proposed model vs UMi on identical distance traces");
    add_scenario(compare, o.scenario);
    add_distance(compare, o.distance);
    add_common(compare, o.common);
    compare->add_option("--pathloss", o.pathloss, "Path-loss parameter file")->check(CLI::ExistingFile);
    compare->add_option("--umi-d1", o.umi_d1, "UMi d1 in m");
    compare->add_option("--umi-d2", o.umi_d2, "UMi d2 in m");

    auto* estimate = app.add_subcommand("estimate", "Estimate per-bin statistics from labeled traces");
    add_scenario(estimate, o.scenario);
    add_common(estimate, o.common);
    estimate->add_option("--input", o.distance.input, "Labeled trace file")->check(CLI::ExistingFile);
    estimate->add_option("--reference", o.reference, "Reference parameter file")->check(CLI::ExistingFile);
    estimate->add_option("--fit", o.fit_output, "Write a refitted parameter file");
    estimate->add_option("--report", o.report_output, "Write the correlation report here");
    estimate->add_option("--correlation-mode", o.correlation_mode, "per-bin or fitted")
        ->check(CLI::IsMember({"per-bin", "fitted"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << V2VLOS_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "v2vlos: " << e.what() << "\n";
        return kExitUsage;
    }

    const Sink sink{out, err, o.common.output};
    try {
        if (gen->parsed())
            return cmd_generate(o, sink);
        if (curves->parsed())
            return cmd_curves(o, sink);
        if (compare->parsed())
            return cmd_compare(o, sink);
        return cmd_estimate(o, sink);
    } catch (const UsageError& e) {
        err << "v2vlos: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "v2vlos: " << e.what() << "\n";
        return kExitRuntime;
    }
}

} // namespace v2vlos::cli
