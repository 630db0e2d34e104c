#include <gtest/gtest.h>

#include <sstream>

#include "helpers.hpp"

using namespace cscc;

namespace {

ExperimentPlan small_plan(std::size_t n = 600) {
    ExperimentPlan plan;
    GeneratorConfig c;
    c.n = n;
    plan.dataset.synthetic = c;
    plan.k = 3;
    plan.seed = 77;
    return plan;
}

}  // namespace

TEST(Experiment, RowBookkeeping) {
    const ExperimentPlan plan = small_plan();
    const ExperimentResult r = run_experiment(plan);
    const std::size_t cells = 2 * 2 * 2;
    ASSERT_EQ(r.rows.size(), cells * (plan.k + 1));
    EXPECT_EQ(r.curves.size(), cells * plan.k);
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t f = 0; f < plan.k; ++f) {
            const ResultRow& row = r.rows[c * (plan.k + 1) + f];
            EXPECT_EQ(row.fold, std::to_string(f + 1));
            EXPECT_TRUE(row.ok()) << row.error;
        }
        EXPECT_EQ(r.rows[c * (plan.k + 1) + plan.k].fold, "mean");
    }
    EXPECT_EQ(r.rows.front().scenario, "b11>b10");
    EXPECT_EQ(r.rows.front().learner, "t");
    EXPECT_EQ(r.rows.front().ranker, "ite");
    EXPECT_EQ(r.rows.back().scenario, "b11<b10");
    EXPECT_EQ(r.rows.back().learner, "s");
    EXPECT_EQ(r.rows.back().ranker, "ecp");
}

TEST(Experiment, MeanRowIsFoldAverage) {
    const ExperimentPlan plan = small_plan();
    const ExperimentResult r = run_experiment(plan);
    for (std::size_t base = 0; base < r.rows.size(); base += plan.k + 1) {
        double q = 0, ap = 0, mp = 0, eta = 0;
        for (std::size_t f = 0; f < plan.k; ++f) {
            q += r.rows[base + f].qini;
            ap += r.rows[base + f].ap;
            mp += r.rows[base + f].mp;
            eta += r.rows[base + f].eta_star;
        }
        const ResultRow& mean = r.rows[base + plan.k];
        const double k = static_cast<double>(plan.k);
        EXPECT_NEAR(mean.qini, q / k, 1e-12);
        EXPECT_NEAR(mean.ap, ap / k, 1e-12);
        EXPECT_NEAR(mean.mp, mp / k, 1e-12);
        EXPECT_NEAR(mean.eta_star, eta / k, 1e-12);
    }
}

TEST(Experiment, ZeroSlopeScenarioGivesIdenticalRankers) {
    ExperimentPlan plan = small_plan();
    plan.scenarios = {{"flat", testutil::spec_of(0, 0, 100, 100, 0, 10, 0, 10)}};
    const ExperimentResult r = run_experiment(plan);
    const RankerComparison cmp = compare_rankers(r.rows);
    for (const RankerDelta& d : cmp.deltas) {
        EXPECT_TRUE(d.valid);
        EXPECT_EQ(d.qini, 0.0);
        EXPECT_EQ(d.ap, 0.0);
        EXPECT_EQ(d.mp, 0.0);
        EXPECT_EQ(d.eta_star, 0.0);
    }
    EXPECT_EQ(cmp.qini.ties, plan.k * plan.learners.size());
}

TEST(Experiment, FoldScoresUseOnlyTrainingRows) {
    ExperimentPlan plan = small_plan();
    plan.learners = {LearnerKind::t};
    plan.rankers = {RankerKind::ecp};
    plan.scenarios = {default_scenarios()[0]};
    const TrialDataset data = load_dataset(plan.dataset, plan.seed);
    const ExperimentResult r = run_experiment(plan, data);
    const auto folds = kfold_split(data, plan.k, derive_seed(plan.seed, "folds"));
    for (std::size_t f = 0; f < plan.k; ++f) {
        const TrialDataset test = data.subset(folds[f].test);
        const auto scored = score_labeled(fit_t_learner(data.subset(folds[f].train)), test);
        const RankedList ranking = rank_ecp(scored, plan.scenarios[0].spec);
        EXPECT_EQ(r.rows[f].qini, qini(scored, ranking).coefficient);
        EXPECT_EQ(r.rows[f].ap, profit_curve(scored, ranking, plan.scenarios[0].spec).ap);
    }
}

TEST(Experiment, Deterministic) {
    const ExperimentPlan plan = small_plan(400);
    std::ostringstream a, b;
    write_results_csv(a, run_experiment(plan).rows);
    write_results_csv(b, run_experiment(plan).rows);
    EXPECT_EQ(a.str(), b.str());
    ExperimentPlan other = plan;
    other.seed = 78;
    std::ostringstream c;
    write_results_csv(c, run_experiment(other).rows);
    EXPECT_NE(a.str(), c.str());
}

TEST(Experiment, OracleLearnerUsesTruth) {
    ExperimentPlan plan = small_plan(400);
    plan.learners = {LearnerKind::oracle};
    const ExperimentResult r = run_experiment(plan);
    for (const ResultRow& row : r.rows) {
        EXPECT_TRUE(row.ok()) << row.error;
        EXPECT_EQ(row.learner, "oracle");
    }
}

TEST(Experiment, FailingCellsBecomeErrorRows) {
    ExperimentPlan plan = small_plan(300);
    plan.scenarios = {{"zero", CostBenefitSpec{}}};
    plan.learners = {LearnerKind::oracle};
    const ExperimentResult r = run_experiment(plan);
    ASSERT_EQ(r.rows.size(), 2 * (plan.k + 1));
    for (std::size_t f = 0; f <= plan.k; ++f) EXPECT_TRUE(r.rows[f].ok()) << r.rows[f].error;
    for (std::size_t f = 0; f < plan.k; ++f)
        EXPECT_EQ(r.rows[plan.k + 1 + f].error.rfind("DegenerateCostStructure", 0), 0u);
    EXPECT_EQ(r.rows.back().error.rfind("NoSuccessfulFolds", 0), 0u);
    const RankerComparison cmp = compare_rankers(r.rows);
    for (const RankerDelta& d : cmp.deltas) EXPECT_FALSE(d.valid);
    std::ostringstream out;
    write_results_csv(out, r.rows);
    EXPECT_NE(out.str().find("zero,oracle,ecp,1,,,,,DegenerateCostStructure"), std::string::npos);
}

TEST(CompareRankers, MissingCounterpart) {
    std::vector<ResultRow> rows(1);
    rows[0] = {"d", "s", "t", "ite", "1", 0.1, 0.2, 0.3, 0.4, ""};
    EXPECT_THROW(compare_rankers(rows), MissingCounterpart);
}

TEST(CompareRankers, DeltasAndTallies) {
    std::vector<ResultRow> rows{
        {"d", "s", "t", "ite", "1", 0.1, 1.0, 2.0, 0.5, ""},
        {"d", "s", "t", "ecp", "1", 0.3, 0.5, 2.0, 0.25, ""},
        {"d", "s", "t", "ite", "mean", 0.1, 1.0, 2.0, 0.5, ""},
        {"d", "s", "t", "ecp", "mean", 0.3, 0.5, 2.0, 0.25, ""},
    };
    const RankerComparison cmp = compare_rankers(rows);
    ASSERT_EQ(cmp.deltas.size(), 2u);
    EXPECT_NEAR(cmp.deltas[0].qini, 0.2, 1e-15);
    EXPECT_EQ(cmp.deltas[0].ap, -0.5);
    EXPECT_EQ(cmp.deltas[0].eta_star, -0.25);
    EXPECT_EQ(cmp.qini.wins, 1u);
    EXPECT_EQ(cmp.ap.losses, 1u);
    EXPECT_EQ(cmp.mp.ties, 1u);
}

TEST(Plan, FromJson) {
    const json j = json::parse(R"({
        "dataset": {"name": "mine", "csv": "data.csv", "treatment": "w", "outcome": "y", "subsample": 0.5},
        "scenarios": [{"name": "a", "outcome_benefit": {"b00": 0, "b01": 0, "b10": 10, "b11": 12},
                       "treatment_cost": {"c00": 0, "c01": 1, "c10": 0, "c11": 1}}],
        "learners": ["s"], "rankers": ["ecp"], "k": 4, "seed": 5, "lambda": 0.5
    })");
    const ExperimentPlan p = plan_from_json(j, "/base");
    EXPECT_EQ(p.dataset.name, "mine");
    EXPECT_FALSE(p.dataset.synthetic.has_value());
    EXPECT_EQ(p.dataset.csv_path, "/base/data.csv");
    EXPECT_EQ(p.dataset.schema.treatment, "w");
    EXPECT_EQ(*p.dataset.subsample, 0.5);
    ASSERT_EQ(p.scenarios.size(), 1u);
    EXPECT_EQ(p.scenarios[0].spec.ob.b11, 12.0);
    EXPECT_EQ(p.learners, (std::vector<LearnerKind>{LearnerKind::s}));
    EXPECT_EQ(p.k, 4u);
    EXPECT_EQ(p.seed, 5u);
    EXPECT_EQ(p.logistic.lambda, 0.5);
}

TEST(Plan, Rejections) {
    EXPECT_THROW(plan_from_json(json::parse(R"({"learners": ["x"]})")), ConfigError);
    EXPECT_THROW(plan_from_json(json::parse(R"({"k": 1})")), ConfigError);
    EXPECT_THROW(plan_from_json(json::parse(R"({"scenarios": []})")), ConfigError);
    EXPECT_THROW(plan_from_json(json::parse(R"({"scenarios": [{"name": "n"}]})")), ConfigError);
}

TEST(Slug, ReplacesComparisons) {
    EXPECT_EQ(slug("b11>b10"), "b11_gt_b10");
    EXPECT_EQ(slug("b11<b10"), "b11_lt_b10");
    EXPECT_EQ(slug("a b"), "a_b");
}
