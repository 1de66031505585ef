#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "cama/errors.hpp"
#include "cama/metrics.hpp"
#include "cama/rank_index.hpp"
#include "cama/rng.hpp"
#include "oracles.hpp"

using namespace cama;

TEST_SUITE_BEGIN("rank_index");

TEST_CASE("build compresses the domain over scores and extra values") {
    const std::array<int, 3> labels = {1, 0, 1};
    const std::array<double, 3> scores = {1.0, 2.0, 3.0};
    const std::array<double, 1> extra = {4.0};
    ScoreIndex index(labels, scores, extra);
    CHECK(index.domain_size() == 4);
    CHECK(index.class_total(1) == 2);
    CHECK(index.class_total(0) == 1);

    // Duplicates collapse to one slot with multiplicity.
    const std::array<int, 4> labels2 = {0, 0, 0, 1};
    const std::array<double, 4> scores2 = {5.0, 5.0, 5.0, 6.0};
    ScoreIndex index2(labels2, scores2, std::array<double, 1>{5.0});
    CHECK(index2.domain_size() == 2);
    const auto counts = index2.count_cmp(0, 5.0);
    CHECK(counts.below == 0);
    CHECK(counts.equal == 3);
    CHECK(counts.above == 0);
}

TEST_CASE("count_cmp on an empty class returns zeros") {
    const std::array<int, 2> labels = {1, 1};
    const std::array<double, 2> scores = {1.0, 2.0};
    ScoreIndex index(labels, scores, {});
    const auto counts = index.count_cmp(0, 1.0);
    CHECK(counts.below == 0);
    CHECK(counts.equal == 0);
    CHECK(counts.above == 0);
}

TEST_CASE("queries outside the compressed domain are rejected") {
    const std::array<int, 2> labels = {1, 0};
    const std::array<double, 2> scores = {1.0, 2.0};
    ScoreIndex index(labels, scores, {});
    CHECK_THROWS_AS(index.count_cmp(0, 1.5), DomainError);
    CHECK_THROWS_AS(index.reassign(0, 9.0), DomainError);
    CHECK_THROWS_AS(index.reassign(5, 1.0), NotFoundError);
}

TEST_CASE("count_cmp matches a naive scan on random queries") {
    Rng rng(21);
    const Cohort cohort = oracles::random_cohort(rng, 100, 0);
    ScoreIndex index(cohort.labels(), cohort.avail_scores(), cohort.acquired_scores());
    std::vector<double> domain(cohort.avail_scores().begin(), cohort.avail_scores().end());
    domain.insert(domain.end(), cohort.acquired_scores().begin(),
                  cohort.acquired_scores().end());
    for (int trial = 0; trial < 1000; ++trial) {
        const double v = domain[static_cast<std::size_t>(rng.uniform() *
                                                         static_cast<double>(domain.size()))];
        const int cls = rng.uniform() < 0.5 ? 0 : 1;
        const auto fast = index.count_cmp(cls, v);
        const auto naive =
            oracles::naive_count_cmp(cohort.labels(), cohort.avail_scores(), cls, v);
        CHECK(fast.below == naive.below);
        CHECK(fast.equal == naive.equal);
        CHECK(fast.above == naive.above);
    }
}

TEST_CASE("reassign to the same and back restores every query") {
    const std::array<int, 3> labels = {1, 0, 1};
    const std::array<double, 3> scores = {1.0, 2.0, 3.0};
    ScoreIndex index(labels, scores, std::array<double, 1>{2.5});

    const auto before = index.count_cmp(1, 2.5);
    index.reassign(0, 1.0);  // identical score
    auto after = index.count_cmp(1, 2.5);
    CHECK(after.below == before.below);
    CHECK(after.equal == before.equal);
    CHECK(after.above == before.above);

    index.reassign(0, 2.5);
    index.reassign(0, 1.0);
    after = index.count_cmp(1, 2.5);
    CHECK(after.below == before.below);
    CHECK(after.equal == before.equal);
    CHECK(after.above == before.above);
    CHECK(index.current_score(0) == 1.0);
}

TEST_CASE("random reassignment sequences replay against the naive structure") {
    Rng rng(22);
    const std::size_t n = 60;
    const Cohort cohort = oracles::random_cohort(rng, n, 0);
    ScoreIndex index(cohort.labels(), cohort.avail_scores(), cohort.acquired_scores());

    std::vector<double> domain(cohort.avail_scores().begin(), cohort.avail_scores().end());
    domain.insert(domain.end(), cohort.acquired_scores().begin(),
                  cohort.acquired_scores().end());
    std::vector<double> shadow(cohort.avail_scores().begin(), cohort.avail_scores().end());

    for (int step = 0; step < 50; ++step) {
        const std::size_t id =
            static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        const double v = domain[static_cast<std::size_t>(rng.uniform() *
                                                         static_cast<double>(domain.size()))];
        index.reassign(id, v);
        shadow[id] = v;
        for (int query = 0; query < 20; ++query) {
            const double q = domain[static_cast<std::size_t>(
                rng.uniform() * static_cast<double>(domain.size()))];
            const int cls = rng.uniform() < 0.5 ? 0 : 1;
            const auto fast = index.count_cmp(cls, q);
            const auto naive = oracles::naive_count_cmp(cohort.labels(), shadow, cls, q);
            CHECK(fast.below == naive.below);
            CHECK(fast.equal == naive.equal);
            CHECK(fast.above == naive.above);
        }
    }
}

TEST_CASE("index auroc equals the metric module") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(rng.uniform() * 80);
        const Cohort cohort = oracles::random_cohort(rng, n, 0);
        ScoreIndex index(cohort.labels(), cohort.avail_scores(), cohort.acquired_scores());
        const double from_index = index.auroc();
        const double from_metrics = auroc(cohort.labels(), cohort.avail_scores());
        CHECK(std::abs(from_index - from_metrics) <= 1e-12);

        // Still consistent after every sample moves to its acquired score.
        std::vector<double> current(cohort.avail_scores().begin(),
                                    cohort.avail_scores().end());
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() < 0.5) {
                index.reassign(i, cohort.acquired_scores()[i]);
                current[i] = cohort.acquired_scores()[i];
            }
        }
        CHECK(std::abs(index.auroc() - auroc(cohort.labels(), current)) <= 1e-12);
    }
}

TEST_SUITE_END();
