#include "v2vlos/markov.hpp"

#include "v2vlos/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace v2vlos {

std::size_t sample_index(const Distribution& p, double u) noexcept
{
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < kStateCount; ++i) {
        if (p[i] <= 0.0)
            continue;
        last_positive = i;
        cumulative += p[i];
        if (u < cumulative)
            return i;
    }
    // u landed in the rounding gap below 1.
    return last_positive;
}

LosState sample_initial_state(const StateProbVector& probs, Rng& rng) noexcept
{
    return state_at(sample_index(probs.p, rng.uniform()));
}

ChainSource::Step ModelChainSource::initial(double d) const
{
    const StateProbVector v = state_probabilities(model_, d);
    return {v.p, v.d, v.distance_clamped};
}

ChainSource::Step ModelChainSource::row(LosState previous, double d) const
{
    const ResolvedDistance rd = resolve_distance(model_, d);
    const TransitionRowModel& r = model_.row(previous);
    return {evaluate_prob_model(r.targets(), rd.value, model_.repair), rd.value, rd.clamped};
}

StateTrace generate_states(const ChainSource& source, const DistanceTrace& trace, RngSeed seed)
{
    if (trace.empty())
        throw DomainError("cannot generate states for an empty distance trace");

    Rng rng(seed);
    StateTrace out;
    out.seed = seed;
    out.steps.reserve(trace.size());

    ChainSource::Step step = source.initial(trace[0].d);
    LosState state = state_at(sample_index(step.p, rng.uniform()));
    out.steps.push_back({trace[0].t, trace[0].d, state});
    out.clamped_steps += step.clamped;

    for (std::size_t i = 1; i < trace.size(); ++i) {
        step = source.row(state, trace[i].d);
        state = state_at(sample_index(step.p, rng.uniform()));
        out.steps.push_back({trace[i].t, trace[i].d, state});
        out.clamped_steps += step.clamped;
    }
    return out;
}

StateTrace generate_states(const ScenarioModel& model, const DistanceTrace& trace, RngSeed seed)
{
    StateTrace out = generate_states(ModelChainSource(model), trace, seed);
    out.scenario = scenario_tag(model.environment, model.density);
    return out;
}

namespace {

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

} // namespace

std::vector<StateTrace> generate_batch(const ScenarioModel& model, std::span<const DistanceTrace> traces,
                                       RngSeed seed, const BatchOptions& options)
{
    std::vector<StateTrace> out(traces.size());
    std::vector<BatchError::Failure> failures;
    std::mutex failures_mutex;

    parallel_for(traces.size(), options.threads, [&](std::size_t i) {
        try {
            out[i] = generate_states(model, traces[i], sub_seed(seed, i));
        } catch (const std::exception& e) {
            std::lock_guard lock(failures_mutex);
            failures.emplace_back(i, e.what());
        }
    });

    if (!failures.empty()) {
        std::sort(failures.begin(), failures.end());
        throw BatchError(std::move(failures));
    }
    return out;
}

} // namespace v2vlos
