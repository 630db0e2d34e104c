#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "helpers.hpp"

using namespace cscc;
using testutil::labeled;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST(CausalConfusion, ToyAtTauPointTwo) {
    const auto data = testutil::toy();
    const CausalConfusionMatrix m = causal_confusion_at_tau(data, rank_ite(data), 0.2);
    EXPECT_DOUBLE_EQ(m.c0, 0.25);
    EXPECT_DOUBLE_EQ(m.c1, 0.25);
    EXPECT_DOUBLE_EQ(m.t0, 0.25);
    EXPECT_DOUBLE_EQ(m.t1, 0.25);
    EXPECT_EQ(m.below_c0, 1);
    EXPECT_EQ(m.below_c1, 1);
    EXPECT_EQ(m.below_t0, 1);
    EXPECT_EQ(m.below_t1, 1);
}

TEST(CausalConfusion, ToyAtInfinities) {
    const auto data = testutil::toy();
    const RankedList r = rank_ite(data);
    const CausalConfusionMatrix top = causal_confusion_at_tau(data, r, kInf);
    EXPECT_DOUBLE_EQ(top.c0, 2.0 / 4);
    EXPECT_DOUBLE_EQ(top.c1, 2.0 / 4);
    EXPECT_EQ(top.t0, 0.0);
    EXPECT_EQ(top.t1, 0.0);
    const CausalConfusionMatrix bottom = causal_confusion_at_tau(data, r, -kInf);
    EXPECT_EQ(bottom.c0, 0.0);
    EXPECT_EQ(bottom.c1, 0.0);
    EXPECT_DOUBLE_EQ(bottom.t0, 2.0 / 4);
    EXPECT_DOUBLE_EQ(bottom.t1, 2.0 / 4);
}

TEST(CausalConfusion, TieAtThresholdCountsAsBelow) {
    const std::vector<ScoredInstance> d{labeled("a", 0.75, 0.25, Treatment::treated, 1),
                                        labeled("b", 0.5, 0.5, Treatment::control, 1)};
    const CausalConfusionMatrix m = causal_confusion_at_tau(d, rank_ite(d), 0.5);
    EXPECT_EQ(m.below_t1, 1);  // t = 0.5 is not above 0.5
    EXPECT_EQ(m.t1, 0.0);
}

TEST(CausalConfusion, Errors) {
    auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    auto missing = d;
    missing[3].outcome.reset();
    EXPECT_THROW(causal_confusion_at_tau(missing, r, 0.0), MissingLabels);
    std::vector<ScoredInstance> only_t{labeled("a", 0.6, 0.2, Treatment::treated, 1)};
    EXPECT_THROW(causal_confusion_at_tau(only_t, rank_ite(only_t), 0.0), EmptyGroup);
}

TEST(CausalConfusion, EtaUsesCeilingOfTopCount) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    // eta = 0.3 on N = 8 -> ceil(2.4) = 3 instances
    const CausalConfusionMatrix a = causal_confusion_at_eta(d, r, 0.3);
    const CausalConfusionMatrix b = causal_confusion_top_k(d, r, 3);
    EXPECT_EQ(a.below_c0, b.below_c0);
    EXPECT_EQ(a.below_t1, b.below_t1);
    // eta = 3/8 computed in floating point stays at 3
    const CausalConfusionMatrix c = causal_confusion_at_eta(d, r, 3.0 / 8.0);
    EXPECT_EQ(c.below_c0, b.below_c0);
    EXPECT_EQ(c.below_t0, b.below_t0);
}

TEST(CausalEffect, ToyAtTauPointTwo) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const CausalEffectMatrix e =
        causal_effect(causal_confusion_at_tau(d, r, 0.2), causal_confusion_at_tau(d, r, kInf));
    EXPECT_DOUBLE_EQ(e.e10, -0.25);
    EXPECT_DOUBLE_EQ(e.e11, 0.25);
    EXPECT_DOUBLE_EQ(e.e00, -0.25);
    EXPECT_DOUBLE_EQ(e.e01, 0.25);
}

TEST(CausalEffect, BaselineIsZeroAndEveryoneTreatedMatchesTotals) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const auto base = causal_confusion_at_tau(d, r, kInf);
    const CausalEffectMatrix z = causal_effect(base, base);
    EXPECT_EQ(z.e00, 0.0);
    EXPECT_EQ(z.e01, 0.0);
    EXPECT_EQ(z.e10, 0.0);
    EXPECT_EQ(z.e11, 0.0);
    const CausalEffectMatrix all = causal_effect(causal_confusion_at_tau(d, r, -kInf), base);
    EXPECT_DOUBLE_EQ(all.e10, -2.0 / 4);  // -C1 / (C0 + C1)
    EXPECT_DOUBLE_EQ(all.e00, -2.0 / 4);
    EXPECT_DOUBLE_EQ(all.e11, 2.0 / 4);  // T1 / (T0 + T1)
    EXPECT_DOUBLE_EQ(all.e01, 2.0 / 4);
}

TEST(CausalProfit, ToyNoCostIsFive) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const CausalEffectMatrix e =
        causal_effect(causal_confusion_at_tau(d, r, 0.2), causal_confusion_at_tau(d, r, kInf));
    EXPECT_NEAR(causal_profit(e, testutil::no_cost_scenario()), 5.0, 1e-12);
}

TEST(CausalProfit, ToyFullScenarioIsZero) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const CausalEffectMatrix e =
        causal_effect(causal_confusion_at_tau(d, r, 0.2), causal_confusion_at_tau(d, r, kInf));
    EXPECT_NEAR(causal_profit(e, scenario_treated_bonus()), 0.0, 1e-12);
}

TEST(CausalProfit, ZeroEffectIsZero) {
    EXPECT_EQ(causal_profit(CausalEffectMatrix{}, scenario_treated_bonus()), 0.0);
}

TEST(ProfitCurve, ZeroSpecIsFlat) {
    const auto d = testutil::toy();
    const ProfitCurve c = profit_curve(d, rank_ite(d), CostBenefitSpec{});
    EXPECT_EQ(c.ap, 0.0);
    EXPECT_EQ(c.mp, 0.0);
    EXPECT_EQ(c.eta_star, 0.0);
}

TEST(ProfitCurve, ToyNineGridPointsAndTrapezoid) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const CostBenefitSpec s = testutil::no_cost_scenario();
    const ProfitCurve c = profit_curve(d, r, s);
    ASSERT_EQ(c.points.size(), 9u);
    const auto order = testutil::order_of(r);
    double trap = 0;
    for (std::size_t k = 0; k <= 8; ++k) {
        EXPECT_DOUBLE_EQ(c.points[k].eta, k / 8.0);
        EXPECT_NEAR(c.points[k].value, testutil::brute_force_profit(d, order, k, s), 1e-12);
        trap += (k == 0 || k == 8 ? 0.5 : 1.0) * c.points[k].value / 8.0;
    }
    EXPECT_NEAR(c.ap, trap, 1e-12);
    // top four by ITE are exactly the t > 0.2 set
    EXPECT_NEAR(c.points[4].value, 5.0, 1e-12);
    EXPECT_EQ(c.points[0].value, 0.0);
    EXPECT_EQ(c.points[0].tau, kInf);
}

TEST(ProfitCurve, EtaStarTakesSmallestArgmax) {
    // one treated positive first, then instances that add nothing
    const std::vector<ScoredInstance> d{labeled("a", 0.9, 0.0, Treatment::treated, 1),
                                        labeled("b", 0.5, 0.0, Treatment::treated, 0),
                                        labeled("c", 0.3, 0.0, Treatment::control, 0)};
    CostBenefitSpec s;
    s.ob.b11 = 10;
    s.ob.b10 = 1;
    const ProfitCurve c = profit_curve(d, rank_ite(d), s);
    // values: 0, 5, 5, 5
    EXPECT_DOUBLE_EQ(c.mp, 5.0);
    EXPECT_DOUBLE_EQ(c.eta_star, 1.0 / 3.0);
}

TEST(ProfitCurve, MaxAtLeastAverageAndNonnegative) {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = testutil::random_labeled(rng, 5 + rng.below(40));
        const CostBenefitSpec s = testutil::random_integer_spec(rng);
        const ProfitCurve c = profit_curve(d, rank_ite(d), s);
        EXPECT_EQ(c.points[0].value, 0.0);
        EXPECT_GE(c.mp, c.ap);
        EXPECT_GE(c.mp, 0.0);
    }
}

TEST(Qini, EndsAtOverallEffect) {
    const auto d = testutil::toy();
    const QiniResult q = qini(d, rank_ite(d));
    EXPECT_EQ(q.curve.front().y, 0.0);
    EXPECT_NEAR(q.curve.back().y, overall_effect(d), 1e-15);
    EXPECT_NEAR(overall_effect(d), 0.0, 1e-15);  // 2/4 - 2/4
}

TEST(Qini, NoPositivesGivesZero) {
    std::vector<ScoredInstance> d;
    for (int i = 0; i < 6; ++i)
        d.push_back(labeled("i" + std::to_string(i), 0.9 - 0.1 * i, 0.0,
                            i % 2 ? Treatment::treated : Treatment::control, 0));
    const QiniResult q = qini(d, rank_ite(d));
    for (const auto& p : q.curve) EXPECT_EQ(p.y, 0.0);
    EXPECT_EQ(q.coefficient, 0.0);
}

TEST(Qini, InterleavedGroupsHandTrapezoid) {
    // treated positive, control negative, repeated 5 times:
    // q = 0, .2, .2, .4, .4, .6, .6, .8, .8, 1, 1 -> area 0.55, chord 0.5
    std::vector<ScoredInstance> d;
    for (int i = 0; i < 5; ++i) {
        d.push_back(labeled("t" + std::to_string(i), 1.0 - 0.1 * i, 0.0, Treatment::treated, 1));
        d.push_back(labeled("c" + std::to_string(i), 0.95 - 0.1 * i, 0.0, Treatment::control, 0));
    }
    const QiniResult q = qini(d, rank_ite(d));
    EXPECT_NEAR(q.curve.back().y, 1.0, 1e-15);
    EXPECT_NEAR(q.coefficient, 0.05, 1e-12);
    // the mirrored interleaving sits below the chord by the same amount
    RankedList swapped = rank_ite(d);
    for (std::size_t k = 0; k + 1 < swapped.size(); k += 2) std::swap(swapped.entries[k], swapped.entries[k + 1]);
    EXPECT_NEAR(qini(d, swapped).coefficient, -0.05, 1e-12);
}

TEST(Qini, TreatmentPositivesFirstIsPositive) {
    // 10 instances: 3 treated positives, 2 treated negatives, 1 control
    // positive, 4 control negatives. Hand trapezoid: q climbs 1/5 per step
    // to 3/5 then stays, minus 1/5 at the last control positive.
    std::vector<ScoredInstance> d;
    const int w[10] = {1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    const int y[10] = {1, 1, 1, 0, 0, 0, 0, 0, 0, 1};
    for (int i = 0; i < 10; ++i)
        d.push_back(labeled("i" + std::to_string(i), 1.0 - 0.05 * i, 0.0,
                            w[i] ? Treatment::treated : Treatment::control, y[i]));
    const QiniResult q = qini(d, rank_ite(d));
    // q_k: 0, .2, .4, .6, .6, .6, .6, .6, .6, .6, .4
    const double qs[11] = {0, .2, .4, .6, .6, .6, .6, .6, .6, .6, .4};
    double area = 0;
    for (int k = 0; k < 10; ++k) area += 0.5 * (qs[k] + qs[k + 1]) / 10;
    EXPECT_NEAR(q.curve.back().y, 0.4, 1e-15);
    EXPECT_NEAR(q.coefficient, area - 0.2, 1e-12);
    EXPECT_NEAR(q.coefficient, 0.5 - 0.2, 1e-12);
    EXPECT_GT(q.coefficient, 0.0);
}

TEST(Qini, OrderOnlyDependsOnRanking) {
    SplitMix64 rng(9);
    const auto d = testutil::random_labeled(rng, 50);
    const RankedList r = rank_ite(d);
    RankedList transformed = r;
    for (auto& e : transformed.entries) e.key = std::exp(3 * e.key) - 7;  // strictly monotone
    EXPECT_EQ(qini(d, r).coefficient, qini(d, transformed).coefficient);
}

TEST(CumulativePositives, ToyTreatmentGroup) {
    const auto d = testutil::toy();
    const RankedList r = rank_ite(d);
    const double taus[4] = {-0.3, 0.05, 0.2, 0.45};
    const long long expect[4] = {2, 2, 1, 1};
    for (int i = 0; i < 4; ++i) EXPECT_EQ(cumulative_positives_at(d, r, Treatment::treated, taus[i]), expect[i]);
    EXPECT_EQ(cumulative_positives_at(d, r, Treatment::treated, 0.7), 0);
    EXPECT_EQ(cumulative_positives_at(d, r, Treatment::treated, -kInf), 2);
}

TEST(CumulativePositives, CurveIsMonotone) {
    SplitMix64 rng(10);
    const auto d = testutil::random_labeled(rng, 60, true);
    const RankedList r = rank_ite(d);
    const auto c = cumulative_positives(d, r, Treatment::control);
    for (std::size_t i = 1; i < c.size(); ++i) {
        EXPECT_LT(c[i - 1].x, c[i].x);
        EXPECT_GE(c[i - 1].y, c[i].y);
    }
    for (const auto& p : c) EXPECT_EQ(static_cast<long long>(p.y), cumulative_positives_at(d, r, Treatment::control, p.x));
}

TEST(CumulativePositives, EmptyGroupIsFlatZero) {
    const std::vector<ScoredInstance> d{labeled("a", 0.6, 0.2, Treatment::treated, 1),
                                        labeled("b", 0.3, 0.2, Treatment::treated, 1)};
    const RankedList r = rank_ite(d);
    for (const auto& p : cumulative_positives(d, r, Treatment::control)) EXPECT_EQ(p.y, 0.0);
}

TEST(ScoreDistribution, ConstantHalf) {
    std::vector<ScoredInstance> d;
    for (int i = 0; i < 7; ++i) d.push_back(labeled(std::to_string(i), 0.5, 0.1, Treatment::treated, 0));
    const auto h = score_distribution(d, Treatment::treated);
    for (std::size_t b = 0; b < kScoreBins; ++b) EXPECT_EQ(h[b], b == 10 ? 7 : 0);
}

TEST(ScoreDistribution, UniformGridAndClosedTop) {
    std::vector<ScoredInstance> d;
    for (int k = 0; k <= 19; ++k) d.push_back(labeled(std::to_string(k), k / 19.0, 0.0, Treatment::control, 0));
    const auto h = score_distribution(d, Treatment::control);
    for (std::size_t b = 0; b < kScoreBins; ++b) EXPECT_EQ(h[b], 1);
    const std::vector<ScoredInstance> one{labeled("x", 1.0, 0.0, Treatment::control, 0)};
    EXPECT_EQ(score_distribution(one, std::nullopt)[kScoreBins - 1], 1);
}

TEST(ScoreDistribution, CountsSumToGroupSize) {
    SplitMix64 rng(12);
    const auto d = testutil::random_labeled(rng, 100);
    long long nt = 0;
    for (const auto& s : d) nt += s.group == Treatment::treated;
    long long sum = 0;
    for (long long c : score_distribution(d, Treatment::treated)) sum += c;
    EXPECT_EQ(sum, nt);
}
