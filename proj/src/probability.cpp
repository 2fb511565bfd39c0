#include "v2vlos/probability.hpp"

#include "v2vlos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace v2vlos {

namespace {

bool is_distribution(const Distribution& v) noexcept
{
    double sum = 0.0;
    for (double x : v) {
        if (!(x >= 0.0) || x > 1.0)
            return false;
        sum += x;
    }
    return std::abs(sum - 1.0) <= 1e-12;
}

} // namespace

Distribution repair_distribution(Distribution v, std::array<LosState, 2> explicit_states, RepairPolicy policy)
{
    if (is_distribution(v))
        return v;

    std::size_t smallest = 0;
    for (std::size_t i = 1; i < kStateCount; ++i)
        if (v[i] < v[smallest])
            smallest = i;
    v[smallest] = 0.0;

    std::size_t kept = kStateCount;
    if (policy == RepairPolicy::KeepFirst) {
        for (LosState s : explicit_states)
            if (index_of(s) != smallest) {
                kept = index_of(s);
                break;
            }
    } else {
        for (std::size_t i = 0; i < kStateCount; ++i) {
            const bool is_explicit = state_at(i) == explicit_states[0] || state_at(i) == explicit_states[1];
            if (i == smallest || !is_explicit)
                continue;
            if (kept == kStateCount || v[i] > v[kept])
                kept = i;
        }
    }

    v[kept] = std::clamp(v[kept], 0.0, 1.0);
    for (std::size_t i = 0; i < kStateCount; ++i)
        if (i != kept && i != smallest)
            v[i] = 1.0 - v[kept];
    return v;
}

Distribution complete_distribution(const ExplicitCurve& first, double first_value, const ExplicitCurve& second,
                                   double second_value, RepairPolicy policy)
{
    Distribution v{};
    v[index_of(first.state)] = first_value;
    v[index_of(second.state)] = second_value;
    for (LosState s : kAllStates)
        if (s != first.state && s != second.state)
            v[index_of(s)] = (1.0 - first_value) - second_value;
    return repair_distribution(v, {first.state, second.state}, policy);
}

Distribution evaluate_prob_model(const StateProbModel& m, double d, RepairPolicy policy)
{
    const auto& [first, second] = m.explicit_curves();
    return complete_distribution(first, eval_curve(first.curve, d), second, eval_curve(second.curve, d), policy);
}

StateProbVector state_probabilities(const ScenarioModel& model, double d)
{
    const ResolvedDistance rd = resolve_distance(model, d);
    return StateProbVector{evaluate_prob_model(model.state_probs, rd.value, model.repair), rd.value, rd.clamped};
}

TransitionMatrix transition_matrix(const ScenarioModel& model, double d)
{
    const ResolvedDistance rd = resolve_distance(model, d);
    TransitionMatrix tm;
    tm.d = rd.value;
    tm.distance_clamped = rd.clamped;
    for (const auto& row : model.rows)
        tm.m[index_of(row.origin())] = evaluate_prob_model(row.targets(), rd.value, model.repair);
    return tm;
}

double total_variation(const Distribution& p, const Distribution& q) noexcept
{
    double sum = 0.0;
    for (std::size_t i = 0; i < kStateCount; ++i)
        sum += std::abs(p[i] - q[i]);
    return sum / 2;
}

namespace {

/// Number of closed communicating classes of the chain.
std::size_t closed_class_count(const Matrix3& m)
{
    std::array<std::array<bool, kStateCount>, kStateCount> reach{};
    for (std::size_t i = 0; i < kStateCount; ++i)
        for (std::size_t j = 0; j < kStateCount; ++j)
            reach[i][j] = i == j || m[i][j] > 0.0;
    for (std::size_t k = 0; k < kStateCount; ++k)
        for (std::size_t i = 0; i < kStateCount; ++i)
            for (std::size_t j = 0; j < kStateCount; ++j)
                reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);

    // A state is in a closed class iff everything it reaches reaches it back;
    // count each such class once by its smallest member.
    std::size_t count = 0;
    for (std::size_t i = 0; i < kStateCount; ++i) {
        bool closed = true;
        bool smallest = true;
        for (std::size_t j = 0; j < kStateCount; ++j) {
            if (reach[i][j] && !reach[j][i])
                closed = false;
            if (j < i && reach[i][j] && reach[j][i])
                smallest = false;
        }
        if (closed && smallest)
            ++count;
    }
    return count;
}

} // namespace

StationaryResult stationary_distribution(const TransitionMatrix& tm, const StationaryOptions& options)
{
    for (const auto& row : tm.m)
        if (!is_distribution(row) && std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) > 1e-9)
            throw DomainError("transition matrix is not row-stochastic");

    Distribution pi{0.6, 0.3, 0.1};
    for (std::size_t it = 1; it <= options.max_iterations; ++it) {
        Distribution next{};
        for (std::size_t i = 0; i < kStateCount; ++i)
            for (std::size_t j = 0; j < kStateCount; ++j)
                next[j] += pi[i] * tm.m[i][j];
        const double sum = next[0] + next[1] + next[2];
        double residual = 0.0;
        for (std::size_t j = 0; j < kStateCount; ++j) {
            next[j] /= sum;
            residual += std::abs(next[j] - pi[j]);
        }
        pi = next;
        if (residual < options.tolerance)
            return StationaryResult{StateProbVector{pi, tm.d, tm.distance_clamped}, closed_class_count(tm.m) == 1,
                                    it};
    }
    throw ConvergenceError("power iteration did not converge within " + std::to_string(options.max_iterations) +
                           " iterations");
}

} // namespace v2vlos
