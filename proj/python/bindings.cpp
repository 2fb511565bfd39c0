#include "v2vlos/dwell.hpp"
#include "v2vlos/errors.hpp"
#include "v2vlos/estimation.hpp"
#include "v2vlos/fit.hpp"
#include "v2vlos/fresnel.hpp"
#include "v2vlos/markov.hpp"
#include "v2vlos/mobility.hpp"
#include "v2vlos/model_io.hpp"
#include "v2vlos/path_loss.hpp"
#include "v2vlos/probability.hpp"
#include "v2vlos/trace_io.hpp"
#include "v2vlos/umi.hpp"

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <string>
#include <vector>

namespace py = pybind11;
using namespace v2vlos;

namespace {

template <typename T>
T parse_or_throw(std::optional<T> value, const char* what, const std::string& text)
{
    if (!value)
        throw py::value_error(std::string("unknown ") + what + " '" + text + "'");
    return *value;
}

LosState to_state(const std::string& s)
{
    return parse_or_throw(parse_state(s), "state", s);
}

std::vector<std::string> state_names(const StateTrace& trace)
{
    std::vector<std::string> out;
    out.reserve(trace.size());
    for (const auto& s : trace.steps)
        out.emplace_back(to_string(s.state));
    return out;
}

StateTrace labeled(const std::vector<double>& distances, const std::vector<std::string>& states, double t0)
{
    if (distances.size() != states.size())
        throw py::value_error("distances and states differ in length");
    StateTrace trace;
    for (std::size_t i = 0; i < distances.size(); ++i)
        trace.steps.push_back({t0 + static_cast<double>(i), distances[i], to_state(states[i])});
    return trace;
}

std::vector<Point> points(const std::vector<double>& d, const std::vector<double>& y)
{
    if (d.size() != y.size())
        throw py::value_error("d and y differ in length");
    std::vector<Point> out;
    for (std::size_t i = 0; i < d.size(); ++i)
        out.push_back({d[i], y[i]});
    return out;
}

CorrelationMode to_mode(const std::string& s)
{
    if (s == "per-bin")
        return CorrelationMode::PerBinEstimates;
    if (s == "fitted")
        return CorrelationMode::FittedCurves;
    throw py::value_error("unknown correlation mode '" + s + "'");
}

py::dict correlation_dict(const CorrelationReport& r)
{
    py::dict out;
    for (std::size_t i = 0; i < kStateCount; ++i) {
        const std::string from(to_string(state_at(i)));
        out[py::str("P_" + from)] = r.state[i];
        for (std::size_t j = 0; j < kStateCount; ++j)
            out[py::str("T_" + from + "_" + std::string(to_string(state_at(j))))] = r.transition[i][j];
    }
    out["bins_used"] = r.bins_used;
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Distance-dependent V2V LOS/NLOSv/NLOSb Markov chain model";
    m.attr("__version__") = V2VLOS_VERSION;

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", error.ptr());
    py::register_exception<RangeError>(m, "RangeError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<SingularError>(m, "SingularError", error.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", error.ptr());
    py::register_exception<BatchError>(m, "BatchError", error.ptr());

    py::class_<ScenarioModel>(m, "Model")
        .def_property_readonly("environment",
                               [](const ScenarioModel& s) { return std::string(to_string(s.environment)); })
        .def_property_readonly("density", [](const ScenarioModel& s) { return std::string(to_string(s.density)); })
        .def_property_readonly("tag", [](const ScenarioModel& s) { return scenario_tag(s.environment, s.density); })
        .def_property(
            "clamp_above_range", [](const ScenarioModel& s) { return s.above_range == AboveRangePolicy::Clamp; },
            [](ScenarioModel& s, bool clamp) {
                s.above_range = clamp ? AboveRangePolicy::Clamp : AboveRangePolicy::Error;
            })
        .def("to_json", &to_parameter_text)
        .def_static("from_json", &parse_parameter_text, py::arg("text"))
        .def_static("load", &load_parameter_file, py::arg("path"))
        .def("save", [](const ScenarioModel& s, const std::filesystem::path& p) { save_parameter_file(s, p); },
             py::arg("path"))
        .def(py::self == py::self)
        .def("__repr__", [](const ScenarioModel& s) { return "<Model " + scenario_tag(s.environment, s.density) + ">"; });

    m.def(
        "builtin_model",
        [](const std::string& env, const std::string& density) {
            return builtin_model(parse_or_throw(parse_environment(env), "environment", env),
                                 parse_or_throw(parse_density(density), "density", density));
        },
        py::arg("environment"), py::arg("density"));

    m.def(
        "state_probabilities", [](const ScenarioModel& s, double d) { return state_probabilities(s, d).p; },
        py::arg("model"), py::arg("d"), "[P_LOS, P_NLOSv, P_NLOSb] at distance d.");
    m.def(
        "transition_matrix", [](const ScenarioModel& s, double d) { return transition_matrix(s, d).m; },
        py::arg("model"), py::arg("d"), "Row-stochastic 3x3 matrix indexed [origin][target].");
    m.def(
        "stationary_distribution",
        [](const ScenarioModel& s, double d) {
            const auto r = stationary_distribution(transition_matrix(s, d));
            return py::make_tuple(r.distribution.p, r.unique);
        },
        py::arg("model"), py::arg("d"));

    m.def(
        "generate_states",
        [](const ScenarioModel& s, const std::vector<double>& distances, std::uint64_t seed, double t0) {
            return state_names(generate_states(s, DistanceTrace::from_distances(distances, t0), RngSeed{seed}));
        },
        py::arg("model"), py::arg("distances"), py::arg("seed"), py::arg("t0") = 0.0);
    m.def(
        "generate_batch",
        [](const ScenarioModel& s, const std::vector<std::vector<double>>& distances, std::uint64_t seed,
           unsigned threads) {
            std::vector<DistanceTrace> traces;
            for (const auto& d : distances)
                traces.push_back(DistanceTrace::from_distances(d));
            std::vector<StateTrace> out;
            {
                py::gil_scoped_release release;
                out = generate_batch(s, traces, RngSeed{seed}, BatchOptions{threads});
            }
            std::vector<std::vector<std::string>> names;
            for (const auto& t : out)
                names.push_back(state_names(t));
            return names;
        },
        py::arg("model"), py::arg("distances"), py::arg("seed"), py::arg("threads") = 0);

    m.def(
        "umi_los_probability", [](double d, double d1, double d2) { return umi_los_probability(d, UmiParams{d1, d2}); },
        py::arg("d"), py::arg("d1") = 18.0, py::arg("d2") = 36.0);
    m.def(
        "generate_states_umi",
        [](const std::vector<double>& distances, std::uint64_t seed, double d1, double d2) {
            return state_names(
                generate_states_umi(DistanceTrace::from_distances(distances), UmiParams{d1, d2}, RngSeed{seed}));
        },
        py::arg("distances"), py::arg("seed"), py::arg("d1") = 18.0, py::arg("d2") = 36.0);

    m.def(
        "synth_distances",
        [](const std::string& kind, double speed, double d0, std::size_t n_steps, std::uint64_t seed) {
            MobilityProfile p;
            p.kind = parse_or_throw(parse_mobility_kind(kind), "mobility kind", kind);
            p.speed = speed;
            p.d0 = d0;
            p.n_steps = n_steps;
            const auto trace = synth_distance_trace(p, RngSeed{seed});
            std::vector<double> out;
            for (const auto& s : trace.steps())
                out.push_back(s.d);
            return out;
        },
        py::arg("kind"), py::arg("speed"), py::arg("d0"), py::arg("n_steps"), py::arg("seed"));

    m.def(
        "mean_dwell",
        [](const std::vector<std::vector<std::string>>& traces) {
            std::vector<StateTrace> labeled_traces;
            for (const auto& states : traces)
                labeled_traces.push_back(labeled(std::vector<double>(states.size(), 1.0), states, 0.0));
            return summarize_dwell(labeled_traces).mean_dwell;
        },
        py::arg("traces"), "Total steps divided by the number of runs, in seconds.");

    py::class_<LogDistance>(m, "LogDistance")
        .def(py::init<double, double>(), py::arg("intercept_db"), py::arg("exponent"))
        .def_readwrite("intercept_db", &LogDistance::intercept_db)
        .def_readwrite("exponent", &LogDistance::exponent);
    py::class_<PathLossParams>(m, "PathLossParams")
        .def(py::init<>())
        .def_readwrite("los", &PathLossParams::los)
        .def_readwrite("nlosb", &PathLossParams::nlosb)
        .def_readwrite("nlosv_extra_db", &PathLossParams::nlosv_extra_db)
        .def_readwrite("carrier_hz", &PathLossParams::carrier_hz)
        .def_static("load", &load_path_loss_params, py::arg("path"));
    m.def("free_space_pl", &free_space_pl, py::arg("d"), py::arg("f"));
    m.def(
        "state_path_loss",
        [](const std::string& state, double d, const PathLossParams& p) { return state_path_loss(to_state(state), d, p); },
        py::arg("state"), py::arg("d"), py::arg("params") = PathLossParams{});
    m.def("fresnel_clearance_radius", &fresnel_clearance_radius, py::arg("d1"), py::arg("d2"), py::arg("f"));

    m.def(
        "fit_poly2",
        [](const std::vector<double>& d, const std::vector<double>& y) {
            const auto f = fit_poly2(points(d, y));
            return py::dict(py::arg("a") = f.curve.a, py::arg("b") = f.curve.b, py::arg("c") = f.curve.c,
                            py::arg("residual") = f.residual, py::arg("std_errors") = f.std_errors);
        },
        py::arg("d"), py::arg("y"));
    m.def(
        "fit_exp_decay",
        [](const std::vector<double>& d, const std::vector<double>& y) {
            const auto f = fit_exp_decay(points(d, y));
            return py::dict(py::arg("a") = f.curve.a, py::arg("b") = f.curve.b, py::arg("residual") = f.residual);
        },
        py::arg("d"), py::arg("y"));
    m.def(
        "fit_logbell",
        [](const std::vector<double>& d, const std::vector<double>& y) {
            const auto f = fit_logbell(points(d, y));
            return py::dict(py::arg("s") = f.curve.s, py::arg("mu") = f.curve.mu, py::arg("k") = f.curve.k,
                            py::arg("residual") = f.residual);
        },
        py::arg("d"), py::arg("y"));
    m.def(
        "pearson",
        [](const std::vector<std::optional<double>>& xs, const std::vector<std::optional<double>>& ys) {
            return pearson(std::span<const std::optional<double>>(xs), std::span<const std::optional<double>>(ys));
        },
        py::arg("xs"), py::arg("ys"), "Sample Pearson r; pairs with a None on either side are skipped.");

    py::class_<EmpiricalStats>(m, "Stats")
        .def(py::init<>())
        .def(
            "add",
            [](EmpiricalStats& s, const std::vector<double>& distances, const std::vector<std::string>& states,
               double t0) { s = accumulate(std::move(s), labeled(distances, states, t0)); },
            py::arg("distances"), py::arg("states"), py::arg("t0") = 0.0)
        .def(
            "add_file",
            [](EmpiricalStats& s, const std::filesystem::path& path) {
                EmpiricalStats next = s;
                for (const auto& t : read_labeled_traces(path))
                    next = accumulate(std::move(next), t);
                s = std::move(next);
            },
            py::arg("path"))
        .def_readonly("total_steps", &EmpiricalStats::total_steps)
        .def_readonly("total_transitions", &EmpiricalStats::total_transitions)
        .def("transition_probs",
             [](const EmpiricalStats& s) {
                 std::vector<std::array<MaybeDistribution, kStateCount>> out;
                 for (const auto& b : empirical_transition_probs(s))
                     out.push_back(b.rows);
                 return out;
             })
        .def("state_probs",
             [](const EmpiricalStats& s) {
                 std::vector<MaybeDistribution> out;
                 for (const auto& b : empirical_state_probs(s))
                     out.push_back(b.p);
                 return out;
             })
        .def(
            "correlate",
            [](const EmpiricalStats& s, const ScenarioModel& reference, const std::string& mode) {
                return correlation_dict(correlate(s, reference, to_mode(mode)));
            },
            py::arg("reference"), py::arg("mode") = "per-bin")
        .def(
            "report",
            [](const EmpiricalStats& s, const ScenarioModel& reference, const std::string& title,
               const std::string& mode) {
                return format_correlation_report(correlate(s, reference, to_mode(mode)), title);
            },
            py::arg("reference"), py::arg("title"), py::arg("mode") = "per-bin")
        .def(
            "fit",
            [](const EmpiricalStats& s, const ScenarioModel& reference) {
                auto f = fit_scenario(s, reference);
                return py::make_tuple(std::move(f.model), f.fallbacks);
            },
            py::arg("reference"))
        .def("to_csv", &format_stats_csv);
}
