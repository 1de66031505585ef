#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cama/cohort.hpp"
#include "cama/gains.hpp"

namespace cama {

// Acquisition strategy taxonomy. True* variants read the acquired score
// but never labels; Expected* variants read the imputed scores but never
// the acquired score or labels; Baseline* variants read only the
// pre-acquisition score; Random reads nothing. The oracle strategies are
// the greedy metric-specific selectors in gains.hpp and are the only
// ones that see labels.
enum class StrategyKind {
    TrueKl,
    TrueRankChange,
    TrueUncertaintyReduction,
    ExpectedKl,
    ExpectedProbability,
    ExpectedUncertaintyReduction,
    ExpectedRankChange,
    BaselineUncertainty,
    BaselineProbability,
    Random,
    OracleAuroc,
    OracleAuprc,
};

inline constexpr StrategyKind kAllStrategies[] = {
    StrategyKind::TrueKl,
    StrategyKind::TrueRankChange,
    StrategyKind::TrueUncertaintyReduction,
    StrategyKind::ExpectedKl,
    StrategyKind::ExpectedProbability,
    StrategyKind::ExpectedUncertaintyReduction,
    StrategyKind::ExpectedRankChange,
    StrategyKind::BaselineUncertainty,
    StrategyKind::BaselineProbability,
    StrategyKind::Random,
    StrategyKind::OracleAuroc,
    StrategyKind::OracleAuprc,
};

// Stable string identifiers used in the CLI, config and output files.
std::string_view strategy_id(StrategyKind kind);
std::optional<StrategyKind> parse_strategy(std::string_view id);

bool is_oracle(StrategyKind kind);
bool needs_imputations(StrategyKind kind);
MetricKind oracle_metric(StrategyKind kind);  // valid for oracle kinds only

// Per-record scorers. Each reads only the fields its category permits.
double score_true_kl(const ScoreRecord& record);
double score_true_uncertainty_reduction(const ScoreRecord& record);
double score_expected_probability(const ScoreRecord& record);
double score_expected_uncertainty_reduction(const ScoreRecord& record);
double score_expected_kl(const ScoreRecord& record);
double score_baseline_uncertainty(const ScoreRecord& record);
double score_baseline_probability(const ScoreRecord& record);

// Rank-change scorers. Ranks are leave-one-out: sample i's probability is
// ranked against the other samples' pre-acquisition probabilities in both
// the before and after position, rank = 1 + count strictly below.
std::vector<double> score_true_rank_change(const Cohort& cohort);
std::vector<double> score_expected_rank_change(const Cohort& cohort);

// Seeded uniform draws, one per sample; counter-based splitmix64 so a
// given seed yields the same vector on any platform.
std::vector<double> score_random(std::size_t n, std::uint64_t seed);

// Dispatch for every non-oracle strategy.
std::vector<double> score_cohort(const Cohort& cohort, StrategyKind kind, std::uint64_t seed);

// The `budget` samples with highest score, descending; ties broken by
// lowest sample id. Deterministic, so smaller budgets are prefixes of
// larger ones.
std::vector<std::size_t> select_top(std::span<const double> scores, std::size_t budget);

}  // namespace cama
