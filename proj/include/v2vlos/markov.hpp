#pragma once

#include "v2vlos/probability.hpp"
#include "v2vlos/rng.hpp"
#include "v2vlos/scenario_model.hpp"
#include "v2vlos/trace.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace v2vlos {

/// Index of the category selected by inverse CDF over `p` in state order for a
/// uniform draw u in [0, 1). Never selects a zero-probability state.
std::size_t sample_index(const Distribution& p, double u) noexcept;

LosState sample_initial_state(const StateProbVector& probs, Rng& rng) noexcept;

/// What the generator consults each step. The generator only ever passes the
/// previous state and the current distance, which keeps the chain Markov.
class ChainSource {
public:
    virtual ~ChainSource() = default;

    struct Step {
        Distribution p;
        double d = 0.0; ///< resolved distance
        bool clamped = false;
    };

    virtual Step initial(double d) const = 0;
    virtual Step row(LosState previous, double d) const = 0;
};

/// ChainSource over a ScenarioModel: initial = state_probabilities,
/// row = the matching row of transition_matrix.
class ModelChainSource final : public ChainSource {
public:
    explicit ModelChainSource(const ScenarioModel& model) : model_(model) {}

    Step initial(double d) const override;
    Step row(LosState previous, double d) const override;

private:
    const ScenarioModel& model_;
};

/// Step 1 from the state distribution at d_1; step k from row state_{k-1} of
/// the matrix at d_k. Empty traces are rejected with DomainError.
StateTrace generate_states(const ChainSource& source, const DistanceTrace& trace, RngSeed seed);

StateTrace generate_states(const ScenarioModel& model, const DistanceTrace& trace, RngSeed seed);

struct BatchOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Trace i is generated with sub_seed(seed, i), so output i does not depend on
/// scheduling. Failures are collected into one BatchError.
std::vector<StateTrace> generate_batch(const ScenarioModel& model, std::span<const DistanceTrace> traces,
                                       RngSeed seed, const BatchOptions& options = {});

} // namespace v2vlos
