#include "cama/gains.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cama/errors.hpp"
#include "cama/metrics.hpp"

namespace cama {

namespace detail {

AuprcEngine AuprcEngine::build(const Cohort& cohort) {
    AuprcEngine engine;
    const std::size_t n = cohort.size();
    engine.labels.assign(cohort.labels().begin(), cohort.labels().end());
    engine.n_pos = cohort.positives();
    if (engine.n_pos == 0) {
        throw UndefinedMetricError("auprc: cohort contains no positive samples");
    }

    std::vector<double> p_current(n);
    std::vector<double> p_acquired(n);
    engine.domain.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        p_current[i] = sigmoid(cohort.avail_scores()[i]);
        p_acquired[i] = sigmoid(cohort.acquired_scores()[i]);
        engine.domain.push_back(p_current[i]);
        engine.domain.push_back(p_acquired[i]);
    }
    std::sort(engine.domain.begin(), engine.domain.end());
    engine.domain.erase(std::unique(engine.domain.begin(), engine.domain.end()),
                        engine.domain.end());

    const std::size_t d = engine.domain.size();
    engine.pos_at.assign(d, 0);
    engine.neg_at.assign(d, 0);
    engine.current_pos.resize(n);
    engine.acquired_pos.resize(n);
    const auto position = [&](double p) {
        return static_cast<std::size_t>(
            std::lower_bound(engine.domain.begin(), engine.domain.end(), p) -
            engine.domain.begin());
    };
    for (std::size_t i = 0; i < n; ++i) {
        engine.current_pos[i] = position(p_current[i]);
        engine.acquired_pos[i] = position(p_acquired[i]);
        if (engine.labels[i] == 1) {
            ++engine.pos_at[engine.current_pos[i]];
        } else {
            ++engine.neg_at[engine.current_pos[i]];
        }
    }
    engine.cum_pos.assign(d, 0);
    engine.cum_neg.assign(d, 0);
    std::int64_t run_pos = 0;
    std::int64_t run_neg = 0;
    for (std::size_t v = d; v-- > 0;) {
        run_pos += engine.pos_at[v];
        run_neg += engine.neg_at[v];
        engine.cum_pos[v] = run_pos;
        engine.cum_neg[v] = run_neg;
    }
    engine.value = engine.from_scratch();
    return engine;
}

double AuprcEngine::from_scratch() const {
    // Step-sum over unique thresholds, descending: each value present in
    // the current assignment contributes (positives at v / N+) * precision
    // at v. Absent values contribute zero either way.
    double area = 0.0;
    for (std::size_t v = domain.size(); v-- > 0;) {
        if (pos_at[v] == 0) {
            continue;
        }
        area += static_cast<double>(pos_at[v]) * static_cast<double>(cum_pos[v]) /
                static_cast<double>(cum_pos[v] + cum_neg[v]);
    }
    return area / static_cast<double>(n_pos);
}

double AuprcEngine::move_delta(std::size_t sample_id) const {
    const std::size_t from = current_pos[sample_id];
    const std::size_t to = acquired_pos[sample_id];
    if (from == to) {
        return 0.0;
    }
    const bool positive = labels[sample_id] == 1;
    const std::int64_t dir = to > from ? 1 : -1;
    const std::size_t lo = std::min(from, to);
    const std::size_t hi = std::max(from, to);

    // Only thresholds inside the moved interval change: the sample's
    // presence flips at the endpoints and the cumulative counts shift by
    // one strictly above lo.
    double delta = 0.0;
    for (std::size_t v = lo; v <= hi; ++v) {
        std::int64_t pos_before = pos_at[v];
        std::int64_t neg_before = neg_at[v];
        std::int64_t pos_after = pos_before;
        std::int64_t neg_after = neg_before;
        if (v == from) {
            (positive ? pos_after : neg_after) -= 1;
        }
        if (v == to) {
            (positive ? pos_after : neg_after) += 1;
        }
        const std::int64_t shift = v > lo ? dir : 0;
        const std::int64_t cpos_after = cum_pos[v] + (positive ? shift : 0);
        const std::int64_t cneg_after = cum_neg[v] + (positive ? 0 : shift);

        if (pos_before > 0) {
            delta -= static_cast<double>(pos_before) * static_cast<double>(cum_pos[v]) /
                     static_cast<double>(cum_pos[v] + cum_neg[v]);
        }
        if (pos_after > 0) {
            delta += static_cast<double>(pos_after) * static_cast<double>(cpos_after) /
                     static_cast<double>(cpos_after + cneg_after);
        }
    }
    return delta / static_cast<double>(n_pos);
}

void AuprcEngine::apply_move(std::size_t sample_id) {
    const std::size_t from = current_pos[sample_id];
    const std::size_t to = acquired_pos[sample_id];
    if (from == to) {
        return;
    }
    value += move_delta(sample_id);
    const bool positive = labels[sample_id] == 1;
    const std::int64_t dir = to > from ? 1 : -1;
    const std::size_t lo = std::min(from, to);
    const std::size_t hi = std::max(from, to);
    if (positive) {
        --pos_at[from];
        ++pos_at[to];
        for (std::size_t v = lo + 1; v <= hi; ++v) {
            cum_pos[v] += dir;
        }
    } else {
        --neg_at[from];
        ++neg_at[to];
        for (std::size_t v = lo + 1; v <= hi; ++v) {
            cum_neg[v] += dir;
        }
    }
    current_pos[sample_id] = to;
}

}  // namespace detail

CohortState::CohortState(const Cohort& cohort, MetricKind kind)
    : cohort_(&cohort), kind_(kind), acquired_(cohort.size(), 0) {
    if (kind_ == MetricKind::Auroc) {
        if (cohort.positives() == 0 || cohort.negatives() == 0) {
            throw UndefinedMetricError("auroc gains: cohort contains a single class");
        }
        index_.emplace(cohort.labels(), cohort.avail_scores(), cohort.acquired_scores());
        pair_norm_ = 2.0 * static_cast<double>(cohort.positives()) *
                     static_cast<double>(cohort.negatives());
        // 2*wins + ties of the initial assignment.
        std::int64_t half_units = 0;
        for (std::size_t i = 0; i < cohort.size(); ++i) {
            if (cohort.labels()[i] != 1) {
                continue;
            }
            const auto counts = index_->count_cmp(0, cohort.avail_scores()[i]);
            half_units += 2 * counts.below + counts.equal;
        }
        half_units_ = half_units;
    } else {
        auprc_ = detail::AuprcEngine::build(cohort);
    }
}

bool CohortState::is_acquired(std::size_t sample_id) const {
    if (sample_id >= acquired_.size()) {
        throw NotFoundError("is_acquired: unknown sample id " + std::to_string(sample_id));
    }
    return acquired_[sample_id] != 0;
}

double CohortState::current_metric() const {
    if (kind_ == MetricKind::Auroc) {
        return static_cast<double>(half_units_) / pair_norm_;
    }
    return auprc_->value;
}

void CohortState::check_candidate(std::size_t sample_id) const {
    if (sample_id >= acquired_.size()) {
        throw NotFoundError("marginal gain: unknown sample id " + std::to_string(sample_id));
    }
    if (acquired_[sample_id]) {
        throw PreconditionError("marginal gain: sample " + std::to_string(sample_id) +
                                " already acquired");
    }
}

std::int64_t CohortState::auroc_half_unit_delta(std::size_t sample_id) const {
    const double current = index_->current_score(sample_id);
    const double target = cohort_->acquired_scores()[sample_id];
    if (current == target) {
        return 0;
    }
    // Net change in favorable comparisons against the opposite class;
    // the sample's own tree entry is in its own class, so the counts
    // need no self-exclusion.
    if (cohort_->labels()[sample_id] == 1) {
        const auto cur = index_->count_cmp(0, current);
        const auto tgt = index_->count_cmp(0, target);
        return (2 * tgt.below + tgt.equal) - (2 * cur.below + cur.equal);
    }
    const auto cur = index_->count_cmp(1, current);
    const auto tgt = index_->count_cmp(1, target);
    return (2 * tgt.above + tgt.equal) - (2 * cur.above + cur.equal);
}

double CohortState::marginal_gain(std::size_t sample_id) const {
    check_candidate(sample_id);
    if (kind_ == MetricKind::Auroc) {
        return static_cast<double>(auroc_half_unit_delta(sample_id)) / pair_norm_;
    }
    return auprc_->move_delta(sample_id);
}

void CohortState::acquire(std::size_t sample_id) {
    check_candidate(sample_id);
    if (kind_ == MetricKind::Auroc) {
        half_units_ += auroc_half_unit_delta(sample_id);
        index_->reassign(sample_id, cohort_->acquired_scores()[sample_id]);
    } else {
        auprc_->apply_move(sample_id);
    }
    acquired_[sample_id] = 1;
    ++n_acquired_;
}

double auroc_marginal_gain(const CohortState& state, std::size_t sample_id) {
    if (state.kind() != MetricKind::Auroc) {
        throw PreconditionError("auroc_marginal_gain: state was built for a different metric");
    }
    return state.marginal_gain(sample_id);
}

double auprc_marginal_gain(const CohortState& state, std::size_t sample_id) {
    if (state.kind() != MetricKind::Auprc) {
        throw PreconditionError("auprc_marginal_gain: state was built for a different metric");
    }
    return state.marginal_gain(sample_id);
}

AcquisitionPlan greedy_oracle_select(const Cohort& cohort, MetricKind metric,
                                     std::size_t budget, OracleMode mode) {
    if (budget > cohort.size()) {
        throw PreconditionError("greedy_oracle_select: budget " + std::to_string(budget) +
                                " exceeds cohort size " + std::to_string(cohort.size()));
    }
    CohortState state(cohort, metric);
    AcquisitionPlan plan;
    plan.initial_metric = state.current_metric();
    plan.steps.reserve(budget);

    std::vector<std::size_t> frozen_order;
    if (mode == OracleMode::Frozen) {
        std::vector<double> initial_gains(cohort.size());
        for (std::size_t i = 0; i < cohort.size(); ++i) {
            initial_gains[i] = state.marginal_gain(i);
        }
        frozen_order.resize(cohort.size());
        std::iota(frozen_order.begin(), frozen_order.end(), 0);
        std::sort(frozen_order.begin(), frozen_order.end(), [&](std::size_t a, std::size_t b) {
            if (initial_gains[a] != initial_gains[b]) {
                return initial_gains[a] > initial_gains[b];
            }
            return a < b;
        });
    }

    for (std::size_t step = 0; step < budget; ++step) {
        std::size_t chosen = 0;
        if (mode == OracleMode::Frozen) {
            chosen = frozen_order[step];
        } else {
            bool found = false;
            double best_gain = 0.0;
            for (std::size_t i = 0; i < cohort.size(); ++i) {
                if (state.is_acquired(i)) {
                    continue;
                }
                const double gain = state.marginal_gain(i);
                if (!found || gain > best_gain) {
                    found = true;
                    best_gain = gain;
                    chosen = i;
                }
            }
        }
        const double realized = state.marginal_gain(chosen);
        state.acquire(chosen);
        plan.steps.push_back({chosen, realized, state.current_metric()});
    }
    return plan;
}

}  // namespace cama
