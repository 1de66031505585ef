#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cama/cohort.hpp"
#include "cama/gains.hpp"
#include "cama/strategies.hpp"

namespace cama {

// |M_post - M_pre| at or below this threshold makes the normalized gain
// ratio undefined; such tasks are degenerate.
inline constexpr double kGainDegeneracyDelta = 1e-9;

std::string_view metric_id(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view id);

// Metric of a label/logit assignment (AUPRC converts through sigmoid).
double metric_value(MetricKind kind, std::span<const int> labels,
                    std::span<const double> logits);

// Budget fractions sampled by a sweep: strictly increasing, starting at 0
// and ending at 1.
class BudgetGrid {
public:
    explicit BudgetGrid(std::vector<double> fractions);
    static BudgetGrid equispaced(std::size_t points);

    std::span<const double> fractions() const { return fractions_; }
    std::size_t size() const { return fractions_.size(); }

private:
    std::vector<double> fractions_;
};

enum class RoundingRule { HalfAwayFromZero, Floor, Ceil };

std::string_view rounding_id(RoundingRule rule);
std::optional<RoundingRule> parse_rounding(std::string_view id);

// Number of samples acquired at a budget fraction; endpoints are forced
// to 0 and n.
std::size_t acquired_count(double fraction, std::size_t n, RoundingRule rule);

struct SweepOptions {
    std::uint64_t seed = 0;                          // feeds the random strategy
    RoundingRule rounding = RoundingRule::HalfAwayFromZero;
    OracleMode oracle_mode = OracleMode::Evolving;
};

// Metric value per grid fraction with the pre/post anchors.
struct PerformanceCurve {
    StrategyKind strategy = StrategyKind::Random;
    MetricKind metric = MetricKind::Auroc;
    std::vector<double> fractions;
    std::vector<double> values;
    double m_pre = 0.0;
    double m_post = 0.0;
};

// Simulates acquisition over the budget grid. Non-oracle strategies score
// once and acquire the top round(b*N) samples at each fraction; oracle
// strategies run one greedy pass to the full budget and replay its prefix.
// Every curve value is the metric recomputed on the substituted scores.
PerformanceCurve sweep(const Cohort& cohort, StrategyKind strategy, MetricKind metric,
                       const BudgetGrid& grid, const SweepOptions& options = {});

// Normalized area of gain: the integral of (value - M_pre) over the
// budget fraction, trapezoidal over the grid, divided by M_post - M_pre.
// Throws DegenerateTaskError when the anchors are too close.
double g_full(const PerformanceCurve& curve);

struct TaskAnchors {
    std::string task;
    double m_pre = 0.0;
    double m_post = 0.0;
};

struct FilterResult {
    std::vector<std::size_t> retained;  // indices into the input span
    std::vector<std::string> drop_log;
};

// Drops tasks whose acquisition is detrimental (M_post < M_pre) or
// degenerate (anchors within kGainDegeneracyDelta).
FilterResult filter_negative_gain(std::span<const TaskAnchors> tasks);

struct AggregateResult {
    double mean = 0.0;
    double sem = 0.0;  // sample stddev / sqrt(n); 0 when n == 1
};

AggregateResult aggregate(std::span<const double> values);

// ---------------------------------------------------------------------
// Evaluation runner: the full (task x strategy x metric x run) fan-out
// behind `evaluate`, producing the two export schemas.

struct EvalConfig {
    std::vector<StrategyKind> strategies;
    std::vector<MetricKind> metrics;
    std::size_t grid_points = 21;
    RoundingRule rounding = RoundingRule::HalfAwayFromZero;
    std::uint64_t runs = 1;
    std::uint64_t base_seed = 0;  // run r uses seed base_seed + r
    bool filter_negative = true;
    OracleMode oracle_mode = OracleMode::Evolving;
    std::size_t threads = 1;
};

struct CurveRow {
    std::string strategy;
    std::string metric;
    std::string task;
    std::uint64_t run = 0;
    double fraction = 0.0;
    double value = 0.0;
    double m_pre = 0.0;
    double m_post = 0.0;
};

struct ReportRow {
    std::string strategy;
    std::string metric;
    std::string task;
    double g_full_mean = 0.0;
    double g_full_sem = 0.0;
    std::uint64_t n_runs = 0;
    std::uint64_t n_dropped_tasks = 0;
};

struct EvalOutput {
    std::vector<CurveRow> curves;
    std::vector<ReportRow> report;
    std::vector<std::string> drop_log;
};

// Runs every requested sweep. Work items fan out across `threads`
// workers; each item is independent and results are assembled in a fixed
// order, so the output is identical for any thread count.
EvalOutput run_evaluation(const std::vector<std::pair<std::string, const Cohort*>>& tasks,
                          const EvalConfig& config);

}  // namespace cama
