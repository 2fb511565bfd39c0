#include "v2vlos/estimation.hpp"

#include "v2vlos/errors.hpp"
#include "v2vlos/fit.hpp"
#include "v2vlos/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace v2vlos {

namespace {

constexpr double kModelRangeMax = kBinWidth * static_cast<double>(kBinCount);

} // namespace

DistanceBin bin_of(double d)
{
    const double upper = kBinWidth * static_cast<double>(kBinCount);
    if (!(d >= 0.0) || !(d < upper))
        throw RangeError("distance " + std::to_string(d) + " m is outside the binned range [0, 500)");
    return DistanceBin{static_cast<std::size_t>(std::floor(d / kBinWidth))};
}

EmpiricalStats& EmpiricalStats::merge(const EmpiricalStats& other) noexcept
{
    for (std::size_t b = 0; b < kBinCount; ++b)
        for (std::size_t i = 0; i < kStateCount; ++i) {
            bins[b].states[i] += other.bins[b].states[i];
            for (std::size_t j = 0; j < kStateCount; ++j)
                bins[b].transitions[i][j] += other.bins[b].transitions[i][j];
        }
    total_steps += other.total_steps;
    total_transitions += other.total_transitions;
    return *this;
}

EmpiricalStats merge(EmpiricalStats a, const EmpiricalStats& b) noexcept
{
    a.merge(b);
    return a;
}

EmpiricalStats accumulate(EmpiricalStats stats, const StateTrace& trace)
{
    trace.validate();
    // Resolve every bin before touching the counts.
    std::vector<std::size_t> bins;
    bins.reserve(trace.size());
    for (const auto& s : trace.steps)
        bins.push_back(s.d == kModelRangeMax ? kBinCount - 1 : bin_of(s.d).index);

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const std::size_t from = index_of(trace.steps[i].state);
        ++stats.bins[bins[i]].states[from];
        if (i + 1 < trace.size()) {
            ++stats.bins[bins[i]].transitions[from][index_of(trace.steps[i + 1].state)];
            ++stats.total_transitions;
        }
    }
    stats.total_steps += trace.size();
    return stats;
}

namespace {

MaybeDistribution normalize(const CountRow& counts)
{
    const std::uint64_t total = counts[0] + counts[1] + counts[2];
    if (total == 0)
        return std::nullopt;
    Distribution p{};
    for (std::size_t i = 0; i < kStateCount; ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return p;
}

} // namespace

std::vector<BinTransitionEstimate> empirical_transition_probs(const EmpiricalStats& stats)
{
    std::vector<BinTransitionEstimate> out;
    out.reserve(kBinCount);
    for (std::size_t b = 0; b < kBinCount; ++b) {
        BinTransitionEstimate e{DistanceBin{b}, {}};
        for (std::size_t i = 0; i < kStateCount; ++i)
            e.rows[i] = normalize(stats.bins[b].transitions[i]);
        out.push_back(e);
    }
    return out;
}

std::vector<BinStateEstimate> empirical_state_probs(const EmpiricalStats& stats)
{
    std::vector<BinStateEstimate> out;
    out.reserve(kBinCount);
    for (std::size_t b = 0; b < kBinCount; ++b)
        out.push_back({DistanceBin{b}, normalize(stats.bins[b].states)});
    return out;
}

double pearson(std::span<const std::optional<double>> xs, std::span<const std::optional<double>> ys)
{
    if (xs.size() != ys.size())
        throw DomainError("pearson needs equal-length series");
    double n = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] && ys[i]) {
            n += 1.0;
            mx += *xs[i];
            my += *ys[i];
        }
    if (n < 2.0)
        throw DegenerateError("pearson needs at least two complete pairs");
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] && ys[i]) {
            const double dx = *xs[i] - mx;
            const double dy = *ys[i] - my;
            sxx += dx * dx;
            syy += dy * dy;
            sxy += dx * dy;
        }
    if (sxx <= 0.0 || syy <= 0.0)
        throw DegenerateError("pearson is undefined for a zero-variance series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson(std::span<const double> xs, std::span<const double> ys)
{
    std::vector<std::optional<double>> ox(xs.begin(), xs.end());
    std::vector<std::optional<double>> oy(ys.begin(), ys.end());
    return pearson(std::span<const std::optional<double>>(ox), std::span<const std::optional<double>>(oy));
}

namespace {

using Series = std::vector<std::optional<double>>;

/// Replaces defined entries by a quadratic least-squares smooth over the bin
/// centers; all entries become undefined when fewer than three are defined.
Series smooth(const Series& s)
{
    std::vector<Point> pts;
    for (std::size_t b = 0; b < s.size(); ++b)
        if (s[b])
            pts.push_back({DistanceBin{b}.center(), *s[b]});
    Series out(s.size());
    try {
        const Poly2Fit fit = fit_poly2(pts);
        const CurveSpec curve(fit.curve);
        for (std::size_t b = 0; b < s.size(); ++b)
            if (s[b])
                out[b] = curve.raw(DistanceBin{b}.center());
    } catch (const SingularError&) {
    }
    return out;
}

std::optional<double> correlation_of(const Series& empirical, const Series& model, CorrelationMode mode)
{
    try {
        const Series x = mode == CorrelationMode::FittedCurves ? smooth(empirical) : empirical;
        return pearson(std::span<const std::optional<double>>(x), std::span<const std::optional<double>>(model));
    } catch (const DegenerateError&) {
        return std::nullopt;
    }
}

} // namespace

CorrelationReport correlate(const EmpiricalStats& stats, const ScenarioModel& reference, CorrelationMode mode)
{
    const auto states = empirical_state_probs(stats);
    const auto transitions = empirical_transition_probs(stats);

    CorrelationReport report;
    report.mode = mode;

    std::vector<StateProbVector> model_states;
    std::vector<TransitionMatrix> model_matrices;
    for (std::size_t b = 0; b < kBinCount; ++b) {
        const double center = DistanceBin{b}.center();
        model_states.push_back(state_probabilities(reference, center));
        model_matrices.push_back(transition_matrix(reference, center));
        if (states[b].p)
            ++report.bins_used;
    }

    for (std::size_t s = 0; s < kStateCount; ++s) {
        Series emp(kBinCount), mod(kBinCount);
        for (std::size_t b = 0; b < kBinCount; ++b) {
            if (states[b].p)
                emp[b] = (*states[b].p)[s];
            mod[b] = model_states[b].p[s];
        }
        report.state[s] = correlation_of(emp, mod, mode);
    }

    for (std::size_t i = 0; i < kStateCount; ++i)
        for (std::size_t j = 0; j < kStateCount; ++j) {
            Series emp(kBinCount), mod(kBinCount);
            for (std::size_t b = 0; b < kBinCount; ++b) {
                if (transitions[b].rows[i])
                    emp[b] = (*transitions[b].rows[i])[j];
                mod[b] = model_matrices[b].m[i][j];
            }
            report.transition[i][j] = correlation_of(emp, mod, mode);
        }
    return report;
}

std::string format_correlation_report(const CorrelationReport& report, const std::string& title)
{
    // Column and row order: LOS, NLOSb, NLOSv.
    constexpr std::array<LosState, kStateCount> order{LosState::LOS, LosState::NLOSb, LosState::NLOSv};
    auto value = [](const std::optional<double>& v) {
        if (!v)
            return std::string("undefined");
        std::ostringstream s;
        s.precision(4);
        s << std::fixed << *v;
        return s.str();
    };

    std::ostringstream out;
    out << "# " << title << '\n';
    out << "# mode=" << (report.mode == CorrelationMode::PerBinEstimates ? "per-bin" : "fitted") << '\n';
    out << "bins_used = " << report.bins_used << '\n';
    for (LosState s : order)
        out << "state." << to_string(s) << " = " << value(report.state[index_of(s)]) << '\n';
    for (LosState from : order)
        for (LosState to : order)
            out << "transition." << to_string(from) << "->" << to_string(to) << " = "
                << value(report.transition[index_of(from)][index_of(to)]) << '\n';
    return out.str();
}

std::string format_stats_csv(const EmpiricalStats& stats)
{
    std::ostringstream out;
    out << "bin,center";
    for (LosState s : kAllStates)
        out << ",n_" << to_string(s);
    for (LosState s : kAllStates)
        out << ",p_" << to_string(s);
    for (LosState a : kAllStates)
        for (LosState b : kAllStates)
            out << ",c_" << to_string(a) << '_' << to_string(b);
    for (LosState a : kAllStates)
        for (LosState b : kAllStates)
            out << ",T_" << to_string(a) << '_' << to_string(b);
    out << '\n';

    const auto states = empirical_state_probs(stats);
    const auto transitions = empirical_transition_probs(stats);
    for (std::size_t b = 0; b < kBinCount; ++b) {
        const BinCounts& c = stats.bins[b];
        out << b << ',' << format_double(DistanceBin{b}.center());
        for (std::size_t i = 0; i < kStateCount; ++i)
            out << ',' << c.states[i];
        for (std::size_t i = 0; i < kStateCount; ++i) {
            out << ',';
            if (states[b].p)
                out << format_double((*states[b].p)[i]);
        }
        for (std::size_t i = 0; i < kStateCount; ++i)
            for (std::size_t j = 0; j < kStateCount; ++j)
                out << ',' << c.transitions[i][j];
        for (std::size_t i = 0; i < kStateCount; ++i)
            for (std::size_t j = 0; j < kStateCount; ++j) {
                out << ',';
                if (transitions[b].rows[i])
                    out << format_double((*transitions[b].rows[i])[j]);
            }
        out << '\n';
    }
    return out.str();
}

} // namespace v2vlos
