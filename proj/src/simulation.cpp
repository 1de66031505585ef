#include "cama/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>
#include <tuple>

#include "cama/errors.hpp"
#include "cama/metrics.hpp"

namespace cama {

std::string_view metric_id(MetricKind kind) {
    return kind == MetricKind::Auroc ? "auroc" : "auprc";
}

std::optional<MetricKind> parse_metric(std::string_view id) {
    if (id == "auroc") {
        return MetricKind::Auroc;
    }
    if (id == "auprc") {
        return MetricKind::Auprc;
    }
    return std::nullopt;
}

double metric_value(MetricKind kind, std::span<const int> labels,
                    std::span<const double> logits) {
    return kind == MetricKind::Auroc ? auroc(labels, logits) : auprc(labels, logits);
}

BudgetGrid::BudgetGrid(std::vector<double> fractions) : fractions_(std::move(fractions)) {
    if (fractions_.size() < 2) {
        throw PreconditionError("BudgetGrid: needs at least the two endpoints");
    }
    if (fractions_.front() != 0.0 || fractions_.back() != 1.0) {
        throw PreconditionError("BudgetGrid: must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < fractions_.size(); ++i) {
        if (!(fractions_[i] > fractions_[i - 1])) {
            throw PreconditionError("BudgetGrid: fractions must be strictly increasing");
        }
    }
}

BudgetGrid BudgetGrid::equispaced(std::size_t points) {
    if (points < 2) {
        throw PreconditionError("BudgetGrid: needs at least two points");
    }
    std::vector<double> fractions(points);
    for (std::size_t i = 0; i < points; ++i) {
        fractions[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    }
    fractions.front() = 0.0;
    fractions.back() = 1.0;
    return BudgetGrid(std::move(fractions));
}

std::string_view rounding_id(RoundingRule rule) {
    switch (rule) {
        case RoundingRule::HalfAwayFromZero: return "round";
        case RoundingRule::Floor: return "floor";
        case RoundingRule::Ceil: return "ceil";
    }
    return "unknown";
}

std::optional<RoundingRule> parse_rounding(std::string_view id) {
    if (id == "round") {
        return RoundingRule::HalfAwayFromZero;
    }
    if (id == "floor") {
        return RoundingRule::Floor;
    }
    if (id == "ceil") {
        return RoundingRule::Ceil;
    }
    return std::nullopt;
}

std::size_t acquired_count(double fraction, std::size_t n, RoundingRule rule) {
    if (!(fraction >= 0.0) || !(fraction <= 1.0)) {
        throw PreconditionError("acquired_count: fraction outside [0,1]");
    }
    if (fraction == 0.0) {
        return 0;
    }
    if (fraction == 1.0) {
        return n;
    }
    const double raw = fraction * static_cast<double>(n);
    double rounded = 0.0;
    switch (rule) {
        case RoundingRule::HalfAwayFromZero: rounded = std::round(raw); break;
        case RoundingRule::Floor: rounded = std::floor(raw); break;
        case RoundingRule::Ceil: rounded = std::ceil(raw); break;
    }
    return std::min(static_cast<std::size_t>(rounded), n);
}

PerformanceCurve sweep(const Cohort& cohort, StrategyKind strategy, MetricKind metric,
                       const BudgetGrid& grid, const SweepOptions& options) {
    const std::size_t n = cohort.size();
    std::vector<std::size_t> order;
    if (is_oracle(strategy)) {
        const AcquisitionPlan plan =
            greedy_oracle_select(cohort, oracle_metric(strategy), n, options.oracle_mode);
        order.reserve(n);
        for (const PlanStep& step : plan.steps) {
            order.push_back(step.sample_id);
        }
    } else {
        order = select_top(score_cohort(cohort, strategy, options.seed), n);
    }

    PerformanceCurve curve;
    curve.strategy = strategy;
    curve.metric = metric;
    curve.fractions.assign(grid.fractions().begin(), grid.fractions().end());
    curve.m_pre = metric_value(metric, cohort.labels(), cohort.avail_scores());
    curve.m_post = metric_value(metric, cohort.labels(), cohort.acquired_scores());

    std::vector<double> scores(cohort.avail_scores().begin(), cohort.avail_scores().end());
    std::size_t applied = 0;
    curve.values.reserve(grid.size());
    for (double fraction : grid.fractions()) {
        const std::size_t count = acquired_count(fraction, n, options.rounding);
        while (applied < count) {
            const std::size_t id = order[applied];
            scores[id] = cohort.acquired_scores()[id];
            ++applied;
        }
        curve.values.push_back(metric_value(metric, cohort.labels(), scores));
    }
    return curve;
}

double g_full(const PerformanceCurve& curve) {
    const double span = curve.m_post - curve.m_pre;
    if (std::abs(span) <= kGainDegeneracyDelta) {
        throw DegenerateTaskError("g_full: |M_post - M_pre| <= " +
                                  std::to_string(kGainDegeneracyDelta) +
                                  ", normalized gain undefined");
    }
    double area = 0.0;
    for (std::size_t i = 1; i < curve.fractions.size(); ++i) {
        const double width = curve.fractions[i] - curve.fractions[i - 1];
        const double left = curve.values[i - 1] - curve.m_pre;
        const double right = curve.values[i] - curve.m_pre;
        area += width * 0.5 * (left + right);
    }
    return area / span;
}

FilterResult filter_negative_gain(std::span<const TaskAnchors> tasks) {
    FilterResult result;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const TaskAnchors& t = tasks[i];
        const double span = t.m_post - t.m_pre;
        if (std::abs(span) <= kGainDegeneracyDelta) {
            std::ostringstream msg;
            msg << "dropped task " << t.task << ": degenerate anchors (m_pre=" << t.m_pre
                << ", m_post=" << t.m_post << ")";
            result.drop_log.push_back(msg.str());
        } else if (span < 0.0) {
            std::ostringstream msg;
            msg << "dropped task " << t.task << ": negative gain (m_pre=" << t.m_pre
                << ", m_post=" << t.m_post << ")";
            result.drop_log.push_back(msg.str());
        } else {
            result.retained.push_back(i);
        }
    }
    return result;
}

AggregateResult aggregate(std::span<const double> values) {
    if (values.empty()) {
        throw PreconditionError("aggregate: needs at least one run");
    }
    AggregateResult result;
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    result.mean = sum / static_cast<double>(values.size());
    if (values.size() == 1) {
        result.sem = 0.0;
        return result;
    }
    double squared = 0.0;
    for (double v : values) {
        const double d = v - result.mean;
        squared += d * d;
    }
    const double sample_stddev = std::sqrt(squared / static_cast<double>(values.size() - 1));
    result.sem = sample_stddev / std::sqrt(static_cast<double>(values.size()));
    return result;
}

namespace {

struct WorkItem {
    std::size_t task_index = 0;
    StrategyKind strategy = StrategyKind::Random;
    MetricKind metric = MetricKind::Auroc;
    std::uint64_t run = 0;
};

}  // namespace

EvalOutput run_evaluation(const std::vector<std::pair<std::string, const Cohort*>>& tasks,
                          const EvalConfig& config) {
    if (tasks.empty()) {
        throw PreconditionError("run_evaluation: no tasks");
    }
    if (config.strategies.empty() || config.metrics.empty() || config.runs == 0) {
        throw ConfigError("run_evaluation: strategies, metrics and runs must be non-empty");
    }
    const BudgetGrid grid = BudgetGrid::equispaced(config.grid_points);

    std::vector<WorkItem> items;
    items.reserve(tasks.size() * config.strategies.size() * config.metrics.size() *
                  config.runs);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (StrategyKind strategy : config.strategies) {
            for (MetricKind metric : config.metrics) {
                for (std::uint64_t run = 0; run < config.runs; ++run) {
                    items.push_back({t, strategy, metric, run});
                }
            }
        }
    }

    std::vector<PerformanceCurve> results(items.size());
    std::vector<std::string> failures(items.size());
    std::atomic<std::size_t> next{0};
    const std::size_t worker_count = std::max<std::size_t>(1, config.threads);
    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= items.size()) {
                return;
            }
            const WorkItem& item = items[i];
            SweepOptions options;
            options.seed = config.base_seed + item.run;
            options.rounding = config.rounding;
            options.oracle_mode = config.oracle_mode;
            try {
                results[i] = sweep(*tasks[item.task_index].second, item.strategy, item.metric,
                                   grid, options);
            } catch (const Error& e) {
                failures[i] = e.what();
            }
        }
    };
    if (worker_count == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(worker_count);
        for (std::size_t w = 0; w < worker_count; ++w) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (!failures[i].empty()) {
            throw ConfigError("sweep failed for strategy " +
                              std::string(strategy_id(items[i].strategy)) + ", metric " +
                              std::string(metric_id(items[i].metric)) + ", task " +
                              tasks[items[i].task_index].first + ": " + failures[i]);
        }
    }

    EvalOutput output;

    // Per-metric task filtering on the (strategy-independent) anchors.
    // Degenerate tasks always drop (the normalized gain is undefined);
    // negative-gain drops are configurable. Dropped tasks keep their
    // curves but contribute no gain rows.
    std::vector<std::vector<char>> retained(config.metrics.size(),
                                            std::vector<char>(tasks.size(), 0));
    std::vector<std::uint64_t> dropped_per_metric(config.metrics.size(), 0);
    for (std::size_t m = 0; m < config.metrics.size(); ++m) {
        std::vector<TaskAnchors> anchors(tasks.size());
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            const Cohort& cohort = *tasks[t].second;
            anchors[t].task =
                tasks[t].first + "/" + std::string(metric_id(config.metrics[m]));
            anchors[t].m_pre =
                metric_value(config.metrics[m], cohort.labels(), cohort.avail_scores());
            anchors[t].m_post =
                metric_value(config.metrics[m], cohort.labels(), cohort.acquired_scores());
        }
        if (config.filter_negative) {
            FilterResult filtered = filter_negative_gain(anchors);
            for (std::size_t idx : filtered.retained) {
                retained[m][idx] = 1;
            }
            for (std::string& line : filtered.drop_log) {
                output.drop_log.push_back(std::move(line));
            }
        } else {
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                if (std::abs(anchors[t].m_post - anchors[t].m_pre) <= kGainDegeneracyDelta) {
                    std::ostringstream msg;
                    msg << "dropped task " << anchors[t].task
                        << ": degenerate anchors (m_pre=" << anchors[t].m_pre
                        << ", m_post=" << anchors[t].m_post << ")";
                    output.drop_log.push_back(msg.str());
                } else {
                    retained[m][t] = 1;
                }
            }
        }
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            if (!retained[m][t]) {
                ++dropped_per_metric[m];
            }
        }
    }

    // Assemble rows in a fixed order, then sort for the export contract.
    std::vector<double> run_gains;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const WorkItem& item = items[i];
        const PerformanceCurve& curve = results[i];
        for (std::size_t g = 0; g < curve.fractions.size(); ++g) {
            CurveRow row;
            row.strategy = std::string(strategy_id(item.strategy));
            row.metric = std::string(metric_id(item.metric));
            row.task = tasks[item.task_index].first;
            row.run = item.run;
            row.fraction = curve.fractions[g];
            row.value = curve.values[g];
            row.m_pre = curve.m_pre;
            row.m_post = curve.m_post;
            output.curves.push_back(std::move(row));
        }
    }
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (StrategyKind strategy : config.strategies) {
            for (std::size_t m = 0; m < config.metrics.size(); ++m) {
                if (!retained[m][t]) {
                    continue;
                }
                run_gains.clear();
                bool degenerate = false;
                for (std::size_t i = 0; i < items.size(); ++i) {
                    const WorkItem& item = items[i];
                    if (item.task_index != t || item.strategy != strategy ||
                        item.metric != config.metrics[m]) {
                        continue;
                    }
                    try {
                        run_gains.push_back(g_full(results[i]));
                    } catch (const DegenerateTaskError&) {
                        degenerate = true;
                        break;
                    }
                }
                if (degenerate) {
                    output.drop_log.push_back(
                        "dropped task " + tasks[t].first + "/" +
                        std::string(metric_id(config.metrics[m])) +
                        ": degenerate anchors, normalized gain undefined");
                    continue;
                }
                const AggregateResult agg = aggregate(run_gains);
                ReportRow row;
                row.strategy = std::string(strategy_id(strategy));
                row.metric = std::string(metric_id(config.metrics[m]));
                row.task = tasks[t].first;
                row.g_full_mean = agg.mean;
                row.g_full_sem = agg.sem;
                row.n_runs = run_gains.size();
                row.n_dropped_tasks = dropped_per_metric[m];
                output.report.push_back(std::move(row));
            }
        }
    }

    std::sort(output.curves.begin(), output.curves.end(),
              [](const CurveRow& a, const CurveRow& b) {
                  return std::tie(a.strategy, a.metric, a.task, a.run, a.fraction) <
                         std::tie(b.strategy, b.metric, b.task, b.run, b.fraction);
              });
    std::sort(output.report.begin(), output.report.end(),
              [](const ReportRow& a, const ReportRow& b) {
                  return std::tie(a.strategy, a.metric, a.task) <
                         std::tie(b.strategy, b.metric, b.task);
              });
    return output;
}

}  // namespace cama
