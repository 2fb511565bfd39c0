#include "v2vlos/errors.hpp"
#include "v2vlos/estimation.hpp"
#include "v2vlos/markov.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace v2vlos;

namespace {

StateTrace labeled(const std::vector<std::pair<double, LosState>>& steps)
{
    StateTrace t;
    double time = 0.0;
    for (const auto& [d, s] : steps)
        t.steps.push_back({time++, d, s});
    return t;
}

constexpr LosState L = LosState::LOS;
constexpr LosState V = LosState::NLOSv;
constexpr LosState B = LosState::NLOSb;

} // namespace

TEST(BinOf, Boundaries)
{
    EXPECT_EQ(bin_of(0.0).index, 0u);
    EXPECT_EQ(bin_of(9.999).index, 0u);
    EXPECT_EQ(bin_of(10.0).index, 1u);
    EXPECT_EQ(bin_of(499.0).index, 49u);
    EXPECT_EQ(bin_of(105.0).center(), 105.0);
    EXPECT_THROW(bin_of(500.0), RangeError);
    EXPECT_THROW(bin_of(-0.1), RangeError);
    EXPECT_THROW(bin_of(std::numeric_limits<double>::quiet_NaN()), RangeError);
}

TEST(Accumulate, DirectCounting)
{
    const auto stats = accumulate({}, labeled({{25, L}, {25, L}, {25, V}}));
    const auto& bin = stats.bins[2];
    EXPECT_EQ(bin.transitions[0][0], 1u);
    EXPECT_EQ(bin.transitions[0][1], 1u);
    EXPECT_EQ(bin.states[0], 2u);
    EXPECT_EQ(bin.states[1], 1u);
    EXPECT_EQ(stats.total_steps, 3u);
    EXPECT_EQ(stats.total_transitions, 2u);
}

TEST(Accumulate, EmptyTraceLeavesStatsUnchanged)
{
    const auto before = accumulate({}, labeled({{5, L}, {6, B}}));
    EXPECT_EQ(accumulate(before, StateTrace{}), before);
}

TEST(Accumulate, TransitionAttributedToOriginBin)
{
    const auto stats = accumulate({}, labeled({{9.5, L}, {10.5, B}}));
    EXPECT_EQ(stats.bins[0].transitions[0][2], 1u);
    EXPECT_EQ(stats.bins[1].transitions[0][2], 0u);
    EXPECT_EQ(stats.bins[1].states[2], 1u);
}

TEST(Accumulate, UpperRangeEdgeJoinsLastBin)
{
    const auto stats = accumulate({}, labeled({{499, L}, {500, V}}));
    EXPECT_EQ(stats.bins[49].states[0], 1u);
    EXPECT_EQ(stats.bins[49].states[1], 1u);
    EXPECT_THROW(accumulate({}, labeled({{500.5, L}})), RangeError);
}

TEST(Accumulate, ErrorsLeaveInputUntouched)
{
    const auto base = accumulate({}, labeled({{5, L}, {6, L}}));
    EXPECT_THROW(accumulate(base, labeled({{20, L}, {510, V}})), RangeError);
    StateTrace gap = labeled({{20, L}, {21, V}});
    gap.steps[1].t = 3.0;
    EXPECT_THROW(accumulate(base, gap), DomainError);
}

TEST(Accumulate, SplitTraceIdentity)
{
    const auto model = builtin_model(Environment::Urban, Density::High);
    std::vector<double> d(300);
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = 1.0 + 1.5 * static_cast<double>(i);
    const auto whole = generate_states(model, DistanceTrace::from_distances(d), RngSeed{4});

    StateTrace first = whole, second = whole;
    first.steps.resize(150);
    second.steps.erase(second.steps.begin(), second.steps.begin() + 150);

    auto expected = accumulate({}, whole);
    const auto& a = whole.steps[149];
    const auto& b = whole.steps[150];
    --expected.bins[bin_of(a.d).index].transitions[index_of(a.state)][index_of(b.state)];
    --expected.total_transitions;

    EXPECT_EQ(merge(accumulate({}, first), accumulate({}, second)), expected);
    EXPECT_EQ(merge(accumulate({}, second), accumulate({}, first)), expected);
}

TEST(Accumulate, OrderIndependent)
{
    const auto t1 = labeled({{5, L}, {15, V}, {25, B}});
    const auto t2 = labeled({{100, B}, {101, B}});
    const auto t3 = labeled({{300, V}, {299, L}, {298, L}});
    const auto a = accumulate(accumulate(accumulate({}, t1), t2), t3);
    const auto b = accumulate(accumulate(accumulate({}, t3), t1), t2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(merge(accumulate({}, t1), merge(accumulate({}, t2), accumulate({}, t3))), a);
}

TEST(EmpiricalProbs, TransitionRowRatios)
{
    EmpiricalStats stats;
    stats.bins[3].transitions[0] = {2, 1, 1};
    const auto est = empirical_transition_probs(stats);
    ASSERT_EQ(est.size(), kBinCount);
    ASSERT_TRUE(est[3].rows[0].has_value());
    EXPECT_EQ(*est[3].rows[0], (Distribution{0.5, 0.25, 0.25}));
    EXPECT_FALSE(est[3].rows[1].has_value());
    EXPECT_FALSE(est[4].rows[0].has_value());
}

TEST(EmpiricalProbs, StateRatios)
{
    EmpiricalStats stats;
    stats.bins[0].states = {3, 1, 0};
    const auto est = empirical_state_probs(stats);
    ASSERT_TRUE(est[0].p.has_value());
    EXPECT_EQ(*est[0].p, (Distribution{0.75, 0.25, 0.0}));
    EXPECT_FALSE(est[1].p.has_value());
}

TEST(EmpiricalProbs, DefinedRowsAreStochastic)
{
    const auto model = builtin_model(Environment::Highway, Density::Medium);
    std::vector<double> d;
    for (int i = 0; i < 20000; ++i)
        d.push_back(1.0 + (i % 499));
    const auto stats = accumulate({}, generate_states(model, DistanceTrace::from_distances(d), RngSeed{2}));
    for (const auto& bin : empirical_transition_probs(stats))
        for (const auto& row : bin.rows)
            if (row) {
                EXPECT_NEAR(std::accumulate(row->begin(), row->end(), 0.0), 1.0, 1e-12);
            }
}

TEST(EmpiricalProbs, RecoversAssembledMatrix)
{
    const auto model = builtin_model(Environment::Urban, Density::High);
    const auto trace = DistanceTrace::from_distances(std::vector<double>(1000000, 105.0));
    const auto stats = accumulate({}, generate_states(model, trace, RngSeed{31}));
    const auto est = empirical_transition_probs(stats)[10];
    const auto tm = transition_matrix(model, 105.0);
    for (std::size_t i = 0; i < kStateCount; ++i) {
        ASSERT_TRUE(est.rows[i].has_value());
        for (std::size_t j = 0; j < kStateCount; ++j)
            EXPECT_NEAR((*est.rows[i])[j], tm.m[i][j], 0.01);
    }
}

TEST(EmpiricalProbs, StateFrequenciesMatchStationary)
{
    const auto model = builtin_model(Environment::Urban, Density::Low);
    const auto trace = DistanceTrace::from_distances(std::vector<double>(1000000, 255.0));
    const auto stats = accumulate({}, generate_states(model, trace, RngSeed{6}));
    const auto p = empirical_state_probs(stats)[25].p;
    ASSERT_TRUE(p.has_value());
    const auto pi = stationary_distribution(transition_matrix(model, 255.0)).distribution.p;
    for (std::size_t s = 0; s < kStateCount; ++s)
        EXPECT_NEAR((*p)[s], pi[s], 0.01);
}

TEST(Pearson, Basics)
{
    const std::vector<double> xs{1, 2, 3, 4, 5.5};
    std::vector<double> neg;
    for (double x : xs)
        neg.push_back(-x);
    EXPECT_NEAR(pearson(xs, xs), 1.0, 1e-15);
    EXPECT_NEAR(pearson(xs, neg), -1.0, 1e-15);
    // Hand value: x = (1,2,3), y = (1,3,2) gives r = 0.5.
    EXPECT_NEAR(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
}

TEST(Pearson, Errors)
{
    EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), DomainError);
    EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), DegenerateError);
    EXPECT_THROW(pearson(std::vector<double>{2, 2, 2}, std::vector<double>{1, 2, 3}), DegenerateError);
}

TEST(Pearson, PairwiseDeletion)
{
    using O = std::optional<double>;
    const std::vector<O> xs{1.0, std::nullopt, 3.0, 4.0, 10.0};
    const std::vector<O> ys{2.0, 5.0, 6.0, std::nullopt, 20.0};
    EXPECT_NEAR(pearson(xs, ys), pearson(std::vector<double>{1, 3, 10}, std::vector<double>{2, 6, 20}), 1e-15);
}

TEST(Pearson, PerturbedCurveCorrelatesStrongly)
{
    const auto model = builtin_model(Environment::Urban, Density::Medium);
    std::vector<double> clean, noisy;
    Rng rng(RngSeed{10});
    for (std::size_t i = 0; i < kBinCount; ++i) {
        const double v = state_probabilities(model, 5.0 + 10.0 * static_cast<double>(i))[LosState::LOS];
        clean.push_back(v);
        noisy.push_back(v * (1.0 + 0.01 * rng.uniform(-1.0, 1.0)));
    }
    EXPECT_GT(pearson(clean, noisy), 0.99);
}

TEST(Correlate, ChainFromModelCorrelatesWithIt)
{
    const auto model = builtin_model(Environment::Urban, Density::Medium);
    std::vector<DistanceTrace> traces;
    std::vector<double> d(500);
    std::iota(d.begin(), d.end(), 1.0);
    for (int i = 0; i < 400; ++i)
        traces.push_back(DistanceTrace::from_distances(d));
    EmpiricalStats stats;
    for (const auto& t : generate_batch(model, traces, RngSeed{1}))
        stats = accumulate(std::move(stats), t);

    for (auto mode : {CorrelationMode::PerBinEstimates, CorrelationMode::FittedCurves}) {
        const auto report = correlate(stats, model, mode);
        EXPECT_EQ(report.mode, mode);
        EXPECT_EQ(report.bins_used, kBinCount);
        for (const auto& r : report.state) {
            ASSERT_TRUE(r.has_value());
            EXPECT_GT(*r, 0.8);
        }
        ASSERT_TRUE(report.transition[0][0].has_value());
        EXPECT_GT(*report.transition[0][0], 0.8);
    }
}

TEST(Correlate, SparseDataGivesUndefinedEntries)
{
    const auto stats = accumulate({}, labeled({{5, L}, {6, L}}));
    const auto report = correlate(stats, builtin_model(Environment::Urban, Density::Low),
                                  CorrelationMode::PerBinEstimates);
    EXPECT_EQ(report.bins_used, 1u);
    EXPECT_FALSE(report.state[0].has_value());
    const std::string text = format_correlation_report(report, "sparse");
    EXPECT_NE(text.find("undefined"), std::string::npos);
}

TEST(CorrelationReport, Layout)
{
    CorrelationReport r;
    r.bins_used = 12;
    r.state = {0.98, 0.5, std::nullopt};
    r.transition[2][2] = 0.91234;
    const std::string text = format_correlation_report(r, "demo");
    const auto los = text.find("state.LOS = 0.9800");
    const auto nlosb = text.find("state.NLOSb = undefined");
    const auto nlosv = text.find("state.NLOSv = 0.5000");
    ASSERT_NE(los, std::string::npos);
    ASSERT_NE(nlosb, std::string::npos);
    ASSERT_NE(nlosv, std::string::npos);
    EXPECT_LT(los, nlosb);
    EXPECT_LT(nlosb, nlosv);
    EXPECT_NE(text.find("bins_used = 12"), std::string::npos);
    EXPECT_NE(text.find("transition.NLOSb->NLOSb = 0.9123"), std::string::npos);
}

TEST(StatsCsv, HeaderAndRows)
{
    const auto stats = accumulate({}, labeled({{25, L}, {25, L}, {25, V}}));
    const std::string csv = format_stats_csv(stats);
    EXPECT_EQ(csv.substr(0, csv.find('\n')).rfind("bin,center,n_LOS,n_NLOSv,n_NLOSb,p_LOS", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(kBinCount + 1));
}
