#include <doctest.h>

#include <cmath>
#include <vector>

#include "cama/errors.hpp"
#include "cama/metrics.hpp"
#include "cama/rng.hpp"
#include "cama/simulation.hpp"
#include "oracles.hpp"

using namespace cama;

namespace {

PerformanceCurve curve_from(std::vector<double> fractions, std::vector<double> values,
                            double m_pre, double m_post) {
    PerformanceCurve curve;
    curve.fractions = std::move(fractions);
    curve.values = std::move(values);
    curve.m_pre = m_pre;
    curve.m_post = m_post;
    return curve;
}

}  // namespace

TEST_SUITE_BEGIN("simulation");

TEST_CASE("budget grid validation") {
    CHECK_THROWS_AS(BudgetGrid({0.0}), PreconditionError);
    CHECK_THROWS_AS(BudgetGrid({0.1, 1.0}), PreconditionError);
    CHECK_THROWS_AS(BudgetGrid({0.0, 0.9}), PreconditionError);
    CHECK_THROWS_AS(BudgetGrid({0.0, 0.5, 0.5, 1.0}), PreconditionError);

    const BudgetGrid grid = BudgetGrid::equispaced(21);
    CHECK(grid.size() == 21);
    CHECK(grid.fractions().front() == 0.0);
    CHECK(grid.fractions().back() == 1.0);
    CHECK(grid.fractions()[10] == 0.5);
}

TEST_CASE("acquired count rounding") {
    CHECK(acquired_count(0.0, 7, RoundingRule::HalfAwayFromZero) == 0);
    CHECK(acquired_count(1.0, 7, RoundingRule::HalfAwayFromZero) == 7);
    // round-half-away-from-zero keeps 50% of an even cohort at n/2
    CHECK(acquired_count(0.5, 10, RoundingRule::HalfAwayFromZero) == 5);
    CHECK(acquired_count(0.5, 7, RoundingRule::HalfAwayFromZero) == 4);  // 3.5 -> 4
    CHECK(acquired_count(0.5, 7, RoundingRule::Floor) == 3);
    CHECK(acquired_count(0.5, 7, RoundingRule::Ceil) == 4);
    CHECK(acquired_count(0.24, 2, RoundingRule::Ceil) == 1);
    CHECK(acquired_count(0.24, 2, RoundingRule::Floor) == 0);
}

TEST_CASE("two-point sweep yields exactly the anchors") {
    Rng rng(51);
    const Cohort cohort = oracles::random_cohort(rng, 30, 2);
    const BudgetGrid grid({0.0, 1.0});
    for (StrategyKind strategy :
         {StrategyKind::BaselineUncertainty, StrategyKind::Random, StrategyKind::TrueKl}) {
        const PerformanceCurve curve = sweep(cohort, strategy, MetricKind::Auroc, grid);
        REQUIRE(curve.values.size() == 2);
        CHECK(curve.values[0] == curve.m_pre);
        CHECK(curve.values[1] == curve.m_post);
    }
}

TEST_CASE("a cohort with no score change sweeps flat") {
    std::vector<ScoreRecord> records;
    Rng rng(52);
    for (std::size_t i = 0; i < 20; ++i) {
        ScoreRecord r;
        r.id = static_cast<std::int64_t>(i);
        r.label = i % 3 == 0 ? 1 : 0;
        r.s_avail = rng.uniform();
        r.s_acquired = r.s_avail;
        records.push_back(std::move(r));
    }
    const Cohort cohort{std::move(records)};
    const PerformanceCurve curve =
        sweep(cohort, StrategyKind::BaselineProbability, MetricKind::Auroc,
              BudgetGrid::equispaced(5));
    CHECK(curve.m_pre == curve.m_post);
    for (double v : curve.values) {
        CHECK(v == curve.m_pre);
    }
}

TEST_CASE("sweep values match independent recomputation of substituted scores") {
    Rng rng(53);
    const Cohort cohort = oracles::random_cohort(rng, 20, 2);
    const BudgetGrid grid = BudgetGrid::equispaced(11);
    SweepOptions options;
    options.seed = 9;
    for (MetricKind metric : {MetricKind::Auroc, MetricKind::Auprc}) {
        const PerformanceCurve curve =
            sweep(cohort, StrategyKind::Random, metric, grid, options);
        const std::vector<std::size_t> order =
            select_top(score_random(cohort.size(), options.seed), cohort.size());
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const std::size_t count =
                acquired_count(grid.fractions()[g], cohort.size(), options.rounding);
            std::vector<std::size_t> subset(order.begin(), order.begin() + count);
            const double expected = oracles::subset_metric(
                cohort, subset, [metric](std::span<const int> labels, std::span<const double> s) {
                    return metric_value(metric, labels, s);
                });
            CHECK(curve.values[g] == expected);
        }
    }
}

TEST_CASE("sweep at full budget reaches the fully acquired metric for every strategy") {
    Rng rng(54);
    const Cohort cohort = oracles::random_cohort(rng, 25, 3);
    const BudgetGrid grid = BudgetGrid::equispaced(3);
    for (StrategyKind strategy : kAllStrategies) {
        const PerformanceCurve curve = sweep(cohort, strategy, MetricKind::Auroc, grid);
        CHECK(std::abs(curve.values.back() - curve.m_post) <= 1e-12);
        CHECK(std::abs(curve.values.front() - curve.m_pre) <= 1e-12);
    }
}

TEST_CASE("oracle sweeps are monotone while greedy gains stay non-negative") {
    Rng rng(55);
    const Cohort cohort = oracles::random_cohort(rng, 40, 0);
    const AcquisitionPlan plan =
        greedy_oracle_select(cohort, MetricKind::Auroc, cohort.size());
    double previous = plan.initial_metric;
    for (const PlanStep& step : plan.steps) {
        if (step.gain >= 0.0) {
            CHECK(step.cumulative_metric >= previous - 1e-15);
        }
        CHECK(std::abs(step.cumulative_metric - (previous + step.gain)) <= 1e-12);
        previous = step.cumulative_metric;
    }
}

TEST_CASE("g_full analytic cases") {
    SUBCASE("constant at the pre anchor is zero") {
        const auto curve = curve_from({0.0, 0.3, 1.0}, {0.6, 0.6, 0.6}, 0.6, 0.9);
        CHECK(g_full(curve) == 0.0);
    }
    SUBCASE("linear curve is one half on any grid") {
        const BudgetGrid equispaced = BudgetGrid::equispaced(21);
        const std::vector<std::vector<double>> grids = {
            {0.0, 0.5, 1.0},
            {0.0, 0.1, 0.2, 0.7, 0.93, 1.0},
            std::vector<double>(equispaced.fractions().begin(),
                                equispaced.fractions().end()),
        };
        for (const auto& fractions : grids) {
            const double m_pre = 0.55;
            const double m_post = 0.88;
            std::vector<double> values;
            for (double f : fractions) {
                values.push_back(m_pre + f * (m_post - m_pre));
            }
            const auto curve = curve_from(fractions, values, m_pre, m_post);
            CHECK(std::abs(g_full(curve) - 0.5) <= 1e-12);
        }
    }
    SUBCASE("constant at the post anchor including b=0 is one") {
        const auto curve = curve_from({0.0, 0.4, 1.0}, {0.9, 0.9, 0.9}, 0.6, 0.9);
        CHECK(std::abs(g_full(curve) - 1.0) <= 1e-12);
    }
    SUBCASE("degenerate anchors are rejected") {
        const auto curve = curve_from({0.0, 1.0}, {0.7, 0.7}, 0.7, 0.7 + 1e-10);
        CHECK_THROWS_AS(g_full(curve), DegenerateTaskError);
    }
}

TEST_CASE("g_full stays within [0,1] for curves between the anchors") {
    Rng rng(56);
    for (int trial = 0; trial < 50; ++trial) {
        const double m_pre = 0.5;
        const double m_post = 0.9;
        std::vector<double> fractions = {0.0};
        for (double f = 0.1; f < 0.95; f += 0.1) {
            fractions.push_back(f);
        }
        fractions.push_back(1.0);
        std::vector<double> values;
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            values.push_back(m_pre + rng.uniform() * (m_post - m_pre));
        }
        const auto curve = curve_from(fractions, values, m_pre, m_post);
        const double g = g_full(curve);
        CHECK(g >= 0.0);
        CHECK(g <= 1.0);
    }
}

TEST_CASE("negative gain filtering") {
    const std::vector<TaskAnchors> tasks = {
        {"improves", 0.6, 0.8},
        {"hurts", 0.8, 0.6},
        {"flat", 0.7, 0.7},
        {"barely", 0.7, 0.7 + 5e-10},
    };
    const FilterResult result = filter_negative_gain(tasks);
    CHECK(result.retained == std::vector<std::size_t>{0});
    REQUIRE(result.drop_log.size() == 3);
    CHECK(result.drop_log[0].find("hurts") != std::string::npos);
    CHECK(result.drop_log[0].find("negative gain") != std::string::npos);
    CHECK(result.drop_log[1].find("flat") != std::string::npos);
    CHECK(result.drop_log[1].find("degenerate") != std::string::npos);
}

TEST_CASE("aggregate mean and standard error") {
    CHECK_THROWS_AS(aggregate({}), PreconditionError);

    const std::vector<double> single = {0.42};
    CHECK(aggregate(single).mean == 0.42);
    CHECK(aggregate(single).sem == 0.0);

    const std::vector<double> same = {1.0, 1.0, 1.0};
    CHECK(aggregate(same).mean == 1.0);
    CHECK(aggregate(same).sem == 0.0);

    const std::vector<double> spread = {0.8, 1.0, 1.2};
    const AggregateResult agg = aggregate(spread);
    CHECK(agg.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(agg.sem == doctest::Approx(0.2 / std::sqrt(3.0)).epsilon(1e-9));
    CHECK(agg.sem == doctest::Approx(0.11547).epsilon(1e-4));
}

TEST_CASE("run_evaluation output is identical for any worker count") {
    Rng rng(57);
    const Cohort cohort = oracles::random_cohort(rng, 40, 3);
    std::vector<std::pair<std::string, const Cohort*>> tasks = {{"t", &cohort}};
    EvalConfig config;
    config.strategies = {StrategyKind::Random, StrategyKind::ExpectedKl,
                         StrategyKind::OracleAuroc};
    config.metrics = {MetricKind::Auroc, MetricKind::Auprc};
    config.grid_points = 5;
    config.runs = 3;
    config.base_seed = 17;

    config.threads = 1;
    const EvalOutput serial = run_evaluation(tasks, config);
    config.threads = 4;
    const EvalOutput parallel = run_evaluation(tasks, config);

    REQUIRE(serial.curves.size() == parallel.curves.size());
    for (std::size_t i = 0; i < serial.curves.size(); ++i) {
        CHECK(serial.curves[i].strategy == parallel.curves[i].strategy);
        CHECK(serial.curves[i].value == parallel.curves[i].value);
    }
    REQUIRE(serial.report.size() == parallel.report.size());
    for (std::size_t i = 0; i < serial.report.size(); ++i) {
        CHECK(serial.report[i].g_full_mean == parallel.report[i].g_full_mean);
        CHECK(serial.report[i].g_full_sem == parallel.report[i].g_full_sem);
    }
}

TEST_CASE("run_evaluation drops detrimental tasks from the report only") {
    // Acquisition strictly hurts: the positive drops below both negatives.
    std::vector<ScoreRecord> records;
    for (std::size_t i = 0; i < 4; ++i) {
        ScoreRecord r;
        r.id = static_cast<std::int64_t>(i);
        r.label = i < 2 ? 1 : 0;
        r.s_avail = r.label == 1 ? 1.0 : -1.0 - static_cast<double>(i);
        r.s_acquired = r.label == 1 ? -10.0 : r.s_avail;
        records.push_back(std::move(r));
    }
    const Cohort cohort{std::move(records)};
    std::vector<std::pair<std::string, const Cohort*>> tasks = {{"detrimental", &cohort}};
    EvalConfig config;
    config.strategies = {StrategyKind::Random};
    config.metrics = {MetricKind::Auroc};
    config.grid_points = 3;

    const EvalOutput filtered = run_evaluation(tasks, config);
    CHECK(filtered.report.empty());
    CHECK(!filtered.curves.empty());
    REQUIRE(filtered.drop_log.size() == 1);
    CHECK(filtered.drop_log[0].find("negative gain") != std::string::npos);

    config.filter_negative = false;
    const EvalOutput unfiltered = run_evaluation(tasks, config);
    REQUIRE(unfiltered.report.size() == 1);
    CHECK(unfiltered.report[0].g_full_mean < 1.0);
}

TEST_SUITE_END();
