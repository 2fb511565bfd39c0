#pragma once

#include "v2vlos/rng.hpp"
#include "v2vlos/trace.hpp"

#include <span>
#include <vector>

namespace v2vlos {

/// 3GPP/ITU urban-micro LOS probability breakpoints.
struct UmiParams {
    double d1 = 18.0;
    double d2 = 36.0;

    void validate() const;
};

/// min(d1/d, 1) * (1 - exp(-d/d2)) + exp(-d/d2). DomainError for d <= 0.
double umi_los_probability(double d, const UmiParams& p = {});

/// Memoryless baseline: every step is independently LOS with the UMi
/// probability, otherwise NLOSb. NLOSv is never produced.
StateTrace generate_states_umi(const DistanceTrace& trace, const UmiParams& p, RngSeed seed);

std::vector<StateTrace> generate_batch_umi(std::span<const DistanceTrace> traces, const UmiParams& p, RngSeed seed);

} // namespace v2vlos
