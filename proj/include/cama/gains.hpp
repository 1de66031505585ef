#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cama/cohort.hpp"
#include "cama/rank_index.hpp"

namespace cama {

enum class MetricKind { Auroc, Auprc };

// Whether greedy selection re-evaluates candidate gains against the
// evolving cohort (previously acquired samples sit at their acquired
// score) or against the frozen all-initial baseline. Evolving is the
// default: it is greedy on the true metric.
enum class OracleMode { Evolving, Frozen };

struct PlanStep {
    std::size_t sample_id = 0;
    double gain = 0.0;               // realized metric change of this acquisition
    double cumulative_metric = 0.0;  // metric after applying this step
};

// Ordered greedy acquisitions with per-step gain annotations.
struct AcquisitionPlan {
    double initial_metric = 0.0;
    std::vector<PlanStep> steps;
};

namespace detail {

// AUPRC bookkeeping over the compressed probability domain: per-value
// class counts plus suffix cumulative counts (samples at or above each
// value), enabling O(|moved interval|) single-swap deltas.
struct AuprcEngine {
    std::vector<double> domain;             // sorted distinct probabilities
    std::vector<std::int64_t> pos_at;       // positives at each value
    std::vector<std::int64_t> neg_at;       // negatives at each value
    std::vector<std::int64_t> cum_pos;      // positives at or above each value
    std::vector<std::int64_t> cum_neg;      // negatives at or above each value
    std::vector<std::size_t> current_pos;   // per-sample domain position
    std::vector<std::size_t> acquired_pos;  // per-sample target position
    std::vector<int> labels;
    std::int64_t n_pos = 0;
    double value = 0.0;  // tracked AUPRC of the current assignment

    static AuprcEngine build(const Cohort& cohort);
    double from_scratch() const;
    double move_delta(std::size_t sample_id) const;
    void apply_move(std::size_t sample_id);
};

}  // namespace detail

// Current acquisition state of a cohort for one target metric: which
// samples sit at their acquired score, plus the metric-specific machinery
// for exact incremental gains. Gain queries for distinct candidates may
// run concurrently between mutations.
class CohortState {
public:
    CohortState(const Cohort& cohort, MetricKind kind);

    MetricKind kind() const { return kind_; }
    std::size_t size() const { return cohort_->size(); }
    std::size_t acquired_count() const { return n_acquired_; }
    bool is_acquired(std::size_t sample_id) const;

    // Metric of the current assignment, tracked exactly for AUROC
    // (integer pair counts) and incrementally for AUPRC.
    double current_metric() const;

    // Exact metric change if sample_id moved from its current score to
    // its acquired score, everything else held at current values.
    // Throws PreconditionError if the sample is already acquired.
    double marginal_gain(std::size_t sample_id) const;

    // Applies the swap for sample_id and updates the tracked metric.
    void acquire(std::size_t sample_id);

private:
    void check_candidate(std::size_t sample_id) const;
    std::int64_t auroc_half_unit_delta(std::size_t sample_id) const;

    const Cohort* cohort_;
    MetricKind kind_;
    std::vector<char> acquired_;
    std::size_t n_acquired_ = 0;

    // AUROC path
    std::optional<ScoreIndex> index_;
    std::int64_t half_units_ = 0;  // 2*wins + ties
    double pair_norm_ = 0.0;       // 2 * N+ * N-

    // AUPRC path
    std::optional<detail::AuprcEngine> auprc_;
};

// Exact AUROC change for a single score swap, computed from rank-index
// count queries against the opposite class. State must be built with
// MetricKind::Auroc.
double auroc_marginal_gain(const CohortState& state, std::size_t sample_id);

// Exact AUPRC change for a single score swap, computed by before/after
// recomputation over the sorted threshold list. State must be built with
// MetricKind::Auprc.
double auprc_marginal_gain(const CohortState& state, std::size_t sample_id);

// Greedy metric-specific oracle: iterates `budget` steps, at each step
// evaluating every unacquired sample's marginal gain, picking the argmax
// (ties broken by lowest sample id) and applying the swap. Frozen mode
// fixes the selection order from the gains against the initial state but
// still records realized gains and true cumulative metrics.
AcquisitionPlan greedy_oracle_select(const Cohort& cohort, MetricKind metric,
                                     std::size_t budget,
                                     OracleMode mode = OracleMode::Evolving);

}  // namespace cama
