#include "v2vlos/umi.hpp"

#include "v2vlos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace v2vlos {

void UmiParams::validate() const
{
    if (!(d1 > 0.0) || !(d2 > 0.0) || !std::isfinite(d1) || !std::isfinite(d2))
        throw DomainError("UMi breakpoints d1 and d2 must be positive");
}

double umi_los_probability(double d, const UmiParams& p)
{
    p.validate();
    if (!std::isfinite(d) || d <= 0.0)
        throw DomainError("UMi LOS probability needs d > 0, got " + std::to_string(d));
    const double decay = std::exp(-d / p.d2);
    return std::min(p.d1 / d, 1.0) * (1.0 - decay) + decay;
}

StateTrace generate_states_umi(const DistanceTrace& trace, const UmiParams& p, RngSeed seed)
{
    p.validate();
    Rng rng(seed);
    StateTrace out;
    out.scenario = "umi";
    out.seed = seed;
    out.steps.reserve(trace.size());
    for (const auto& step : trace.steps()) {
        const double p_los = umi_los_probability(step.d, p);
        out.steps.push_back({step.t, step.d, rng.uniform() < p_los ? LosState::LOS : LosState::NLOSb});
    }
    return out;
}

std::vector<StateTrace> generate_batch_umi(std::span<const DistanceTrace> traces, const UmiParams& p, RngSeed seed)
{
    std::vector<StateTrace> out;
    out.reserve(traces.size());
    for (std::size_t i = 0; i < traces.size(); ++i)
        out.push_back(generate_states_umi(traces[i], p, sub_seed(seed, i)));
    return out;
}

} // namespace v2vlos
