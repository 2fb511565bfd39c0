#include "oracle.hpp"

#include "v2vlos/errors.hpp"
#include "v2vlos/probability.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace v2vlos;

namespace {

double sum(const Distribution& d)
{
    return std::accumulate(d.begin(), d.end(), 0.0);
}

void expect_distribution(const Distribution& d)
{
    for (double x : d) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
    }
    EXPECT_NEAR(sum(d), 1.0, 1e-9);
}

TransitionMatrix matrix(const Matrix3& m)
{
    TransitionMatrix tm;
    tm.m = m;
    tm.d = 50.0;
    return tm;
}

} // namespace

TEST(StateProbabilities, UrbanMediumAt100)
{
    const auto p = state_probabilities(builtin_model(Environment::Urban, Density::Medium), 100.0);
    EXPECT_NEAR(p[LosState::LOS], oracle::kUrbanMediumLos100, 1e-12);
    EXPECT_NEAR(p[LosState::NLOSv], oracle::kUrbanMediumNlosv100, 1e-12);
    EXPECT_NEAR(p[LosState::NLOSb], oracle::kUrbanMediumNlosb100, 1e-12);
    EXPECT_NEAR(p[LosState::LOS], 0.2678, 1e-4);
    EXPECT_NEAR(p[LosState::NLOSv], 0.300, 1e-3);
    EXPECT_NEAR(p[LosState::NLOSb], 0.432, 1e-3);
    EXPECT_FALSE(p.distance_clamped);
}

TEST(StateProbabilities, HighwayHighAt500)
{
    const auto p = state_probabilities(builtin_model(Environment::Highway, Density::High), 500.0);
    const double los = oracle::poly2(3.2e-6, -0.003, 1.0, 500.0);
    const double nlosb = oracle::poly2(-4.1e-7, 0.00067, 0.0, 500.0);
    EXPECT_NEAR(p[LosState::LOS], 0.3, 1e-12);
    EXPECT_NEAR(p[LosState::NLOSb], 0.2325, 1e-12);
    EXPECT_NEAR(p[LosState::NLOSv], 0.4675, 1e-12);
    EXPECT_NEAR(p[LosState::NLOSv], 1.0 - los - nlosb, 1e-12);
}

TEST(StateProbabilities, HighwayLowNearZeroIsRepaired)
{
    const auto p = state_probabilities(builtin_model(Environment::Highway, Density::Low), 1e-6);
    EXPECT_TRUE(p.distance_clamped);
    EXPECT_EQ(p.d, 1.0);
    // LOS and NLOSb curves sum above one at 1 m: the complement is zeroed and
    // NLOSb becomes 1 - LOS.
    const double los = oracle::poly2(1.5e-6, -0.0015, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(p[LosState::LOS], los);
    EXPECT_EQ(p[LosState::NLOSv], 0.0);
    EXPECT_DOUBLE_EQ(p[LosState::NLOSb], 1.0 - los);
    EXPECT_NEAR(p[LosState::LOS], 1.0, 2e-3);
    expect_distribution(p.p);
}

TEST(StateProbabilities, UrbanHighAtOneMetre)
{
    const auto p = state_probabilities(builtin_model(Environment::Urban, Density::High), 1.0);
    EXPECT_NEAR(p[LosState::LOS], oracle::kUrbanHighLos1, 1e-12);
}

TEST(TransitionMatrix, UrbanMediumLosRowAt200)
{
    const auto tm = transition_matrix(builtin_model(Environment::Urban, Density::Medium), 200.0);
    EXPECT_NEAR(tm(LosState::LOS, LosState::LOS), 0.75, 1e-12);
    EXPECT_NEAR(tm(LosState::LOS, LosState::NLOSb), 0.0913, 1e-12);
    EXPECT_NEAR(tm(LosState::LOS, LosState::NLOSv), 0.1587, 1e-12);
}

TEST(TransitionMatrix, HighwayLowNlosbToNlosvIsExactlyZero)
{
    const auto model = builtin_model(Environment::Highway, Density::Low);
    for (double d : {5.0, 60.0, 150.0, 320.0, 500.0})
        EXPECT_EQ(transition_matrix(model, d)(LosState::NLOSb, LosState::NLOSv), 0.0) << d;
}

TEST(TransitionMatrix, RowStochasticSweep)
{
    for (Environment env : kAllEnvironments)
        for (Density density : kAllDensities) {
            const auto model = builtin_model(env, density);
            for (int d = 1; d <= 500; ++d) {
                const auto tm = transition_matrix(model, d);
                for (const auto& row : tm.m)
                    expect_distribution(row);
                expect_distribution(state_probabilities(model, d).p);
            }
        }
}

TEST(TransitionMatrix, AboveRangePolicy)
{
    auto model = builtin_model(Environment::Urban, Density::Low);
    EXPECT_THROW(transition_matrix(model, 501.0), DomainError);
    model.above_range = AboveRangePolicy::Clamp;
    const auto tm = transition_matrix(model, 501.0);
    EXPECT_TRUE(tm.distance_clamped);
    EXPECT_EQ(tm.m, transition_matrix(model, 500.0).m);
}

TEST(Repair, KeepLargestExplicit)
{
    const Distribution r =
        repair_distribution({0.7, 0.6, -0.3}, {LosState::NLOSv, LosState::LOS}, RepairPolicy::KeepLargest);
    EXPECT_DOUBLE_EQ(r[0], 0.7);
    EXPECT_DOUBLE_EQ(r[1], 0.3);
    EXPECT_EQ(r[2], 0.0);
}

TEST(Repair, KeepFirstExplicit)
{
    const Distribution r =
        repair_distribution({0.7, 0.6, -0.3}, {LosState::NLOSv, LosState::LOS}, RepairPolicy::KeepFirst);
    EXPECT_DOUBLE_EQ(r[0], 0.4);
    EXPECT_DOUBLE_EQ(r[1], 0.6);
    EXPECT_EQ(r[2], 0.0);
}

TEST(Repair, TieZeroesEarliestState)
{
    const Distribution r =
        repair_distribution({0.3, 0.3, 0.9}, {LosState::NLOSv, LosState::NLOSb}, RepairPolicy::KeepLargest);
    EXPECT_EQ(r[0], 0.0);
    EXPECT_DOUBLE_EQ(r[2], 0.9);
    EXPECT_NEAR(r[1], 0.1, 1e-15);
}

TEST(Repair, IdempotentOnValidVectors)
{
    const Distribution valid{0.2, 0.3, 0.5};
    for (auto policy : {RepairPolicy::KeepLargest, RepairPolicy::KeepFirst}) {
        EXPECT_EQ(repair_distribution(valid, {LosState::LOS, LosState::NLOSb}, policy), valid);
        const Distribution once = repair_distribution({0.9, 0.4, -0.3}, {LosState::LOS, LosState::NLOSv}, policy);
        EXPECT_EQ(repair_distribution(once, {LosState::LOS, LosState::NLOSv}, policy), once);
    }
}

TEST(Repair, CompleteDistributionComputesComplement)
{
    const ExplicitCurve a{LosState::LOS, Poly2{}};
    const ExplicitCurve b{LosState::NLOSb, Poly2{}};
    const Distribution d = complete_distribution(a, 0.25, b, 0.5, RepairPolicy::KeepLargest);
    EXPECT_EQ(d[0], 0.25);
    EXPECT_EQ(d[1], 0.25);
    EXPECT_EQ(d[2], 0.5);
}

TEST(Stationary, RankOneChain)
{
    const Distribution row{0.2, 0.3, 0.5};
    const auto r = stationary_distribution(matrix({row, row, row}));
    EXPECT_TRUE(r.unique);
    for (std::size_t i = 0; i < kStateCount; ++i)
        EXPECT_NEAR(r.distribution.p[i], row[i], 1e-12);
}

TEST(Stationary, IdentityIsFlaggedNonUnique)
{
    const auto r = stationary_distribution(matrix({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}));
    EXPECT_FALSE(r.unique);
    expect_distribution(r.distribution.p);
}

TEST(Stationary, PeriodicChainDoesNotConverge)
{
    EXPECT_THROW(stationary_distribution(matrix({{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}}), {1e-10, 1000}),
                 ConvergenceError);
}

TEST(Stationary, RejectsNonStochasticInput)
{
    EXPECT_THROW(stationary_distribution(matrix({{{0.5, 0.6, 0}, {0, 1, 0}, {0, 0, 1}}})), DomainError);
}

TEST(Stationary, TwoStateClosedForm)
{
    // Two-state chain with p = P(0->1), q = P(1->0): pi = (q, p) / (p + q).
    const double p = 0.1, q = 0.3;
    const auto r = stationary_distribution(matrix({{{1 - p, p, 0}, {q, 1 - q, 0}, {0.5, 0.25, 0.25}}}));
    EXPECT_TRUE(r.unique);
    EXPECT_NEAR(r.distribution.p[0], q / (p + q), 1e-9);
    EXPECT_NEAR(r.distribution.p[1], p / (p + q), 1e-9);
    EXPECT_NEAR(r.distribution.p[2], 0.0, 1e-9);
}

TEST(Stationary, UrbanHighDiagnostic)
{
    const auto model = builtin_model(Environment::Urban, Density::High);
    const auto r = stationary_distribution(transition_matrix(model, 50.0));
    expect_distribution(r.distribution.p);
    const double gap = total_variation(r.distribution.p, state_probabilities(model, 50.0).p);
    RecordProperty("stationary_vs_fitted_tv", std::to_string(gap));
    EXPECT_GE(gap, 0.0);
}

TEST(TotalVariation, Basics)
{
    EXPECT_EQ(total_variation({1, 0, 0}, {0, 1, 0}), 1.0);
    EXPECT_EQ(total_variation({0.2, 0.3, 0.5}, {0.2, 0.3, 0.5}), 0.0);
}
