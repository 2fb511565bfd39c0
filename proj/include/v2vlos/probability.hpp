#pragma once

#include "v2vlos/los_state.hpp"
#include "v2vlos/scenario_model.hpp"

#include <array>
#include <cstddef>

namespace v2vlos {

using Distribution = std::array<double, kStateCount>;
using Matrix3 = std::array<Distribution, kStateCount>;

/// Probability of each state at one distance.
struct StateProbVector {
    Distribution p{};
    /// Distance after range policy was applied.
    double d = 0.0;
    /// True when the requested distance was moved into the valid range.
    bool distance_clamped = false;

    double operator[](LosState s) const noexcept { return p[index_of(s)]; }
};

/// Row-stochastic one-second transition matrix, indexed (origin, target).
struct TransitionMatrix {
    Matrix3 m{};
    double d = 0.0;
    bool distance_clamped = false;

    const Distribution& row(LosState origin) const noexcept { return m[index_of(origin)]; }
    double operator()(LosState from, LosState to) const noexcept { return m[index_of(from)][index_of(to)]; }
};

/// Builds a full triple from two explicit values; the third state gets the
/// complement. When the complement is negative the triple is repaired per
/// `policy`. Ties for the smallest entry go to the earliest state.
Distribution complete_distribution(const ExplicitCurve& first, double first_value, const ExplicitCurve& second,
                                   double second_value, RepairPolicy policy);

/// Repair of an arbitrary triple. `explicit_states` names the entries that
/// came from fitted curves, first-listed first. A triple that is already a
/// distribution (non-negative, sums to one within 1e-12) is returned unchanged.
Distribution repair_distribution(Distribution v, std::array<LosState, 2> explicit_states, RepairPolicy policy);

/// Evaluates one two-curve model at an already-resolved distance.
Distribution evaluate_prob_model(const StateProbModel& m, double d, RepairPolicy policy);

StateProbVector state_probabilities(const ScenarioModel& model, double d);
TransitionMatrix transition_matrix(const ScenarioModel& model, double d);

struct StationaryOptions {
    double tolerance = 1e-10;
    std::size_t max_iterations = 100000;
};

struct StationaryResult {
    StateProbVector distribution;
    /// False when the chain has more than one closed class, in which case the
    /// returned distribution depends on the start vector.
    bool unique = true;
    std::size_t iterations = 0;
};

/// Left eigenvector for eigenvalue one via power iteration. Throws
/// ConvergenceError when the L1 step residual does not fall below tolerance
/// within max_iterations (periodic chains).
StationaryResult stationary_distribution(const TransitionMatrix& tm, const StationaryOptions& options = {});

/// Sum of |p - q| / 2.
double total_variation(const Distribution& p, const Distribution& q) noexcept;

} // namespace v2vlos
