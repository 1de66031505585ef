#include "cama/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "cama/errors.hpp"
#include "cama/metrics.hpp"
#include "cama/rng.hpp"

namespace cama {

std::string_view strategy_id(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::TrueKl: return "true_kl";
        case StrategyKind::TrueRankChange: return "true_rank";
        case StrategyKind::TrueUncertaintyReduction: return "true_uncert";
        case StrategyKind::ExpectedKl: return "exp_kl";
        case StrategyKind::ExpectedProbability: return "exp_prob";
        case StrategyKind::ExpectedUncertaintyReduction: return "exp_uncert";
        case StrategyKind::ExpectedRankChange: return "exp_rank";
        case StrategyKind::BaselineUncertainty: return "base_uncert";
        case StrategyKind::BaselineProbability: return "base_prob";
        case StrategyKind::Random: return "random";
        case StrategyKind::OracleAuroc: return "oracle_auroc";
        case StrategyKind::OracleAuprc: return "oracle_auprc";
    }
    return "unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view id) {
    for (StrategyKind kind : kAllStrategies) {
        if (strategy_id(kind) == id) {
            return kind;
        }
    }
    return std::nullopt;
}

bool is_oracle(StrategyKind kind) {
    return kind == StrategyKind::OracleAuroc || kind == StrategyKind::OracleAuprc;
}

bool needs_imputations(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::ExpectedKl:
        case StrategyKind::ExpectedProbability:
        case StrategyKind::ExpectedUncertaintyReduction:
        case StrategyKind::ExpectedRankChange:
            return true;
        default:
            return false;
    }
}

MetricKind oracle_metric(StrategyKind kind) {
    if (kind == StrategyKind::OracleAuroc) {
        return MetricKind::Auroc;
    }
    if (kind == StrategyKind::OracleAuprc) {
        return MetricKind::Auprc;
    }
    throw PreconditionError("oracle_metric: strategy is not an oracle");
}

namespace {

void require_imputations(const ScoreRecord& record, const char* op) {
    if (record.s_imp.empty()) {
        throw PreconditionError(std::string(op) + ": record has no imputed scores");
    }
}

// Sums per-imputation terms in sorted order so the result is exactly
// invariant under permutation of the K imputation samples.
template <typename TermFn>
double imputation_mean(const ScoreRecord& record, TermFn term) {
    std::vector<double> terms;
    terms.reserve(record.s_imp.size());
    for (double s : record.s_imp) {
        terms.push_back(term(s));
    }
    std::sort(terms.begin(), terms.end());
    double sum = 0.0;
    for (double t : terms) {
        sum += t;
    }
    return sum / static_cast<double>(terms.size());
}

// Rank of probability x against the other samples' pre-acquisition
// probabilities: 1 + count strictly below x, with the sample's own entry
// removed from the sorted pool.
std::int64_t rank_excluding_self(const std::vector<double>& sorted_avail, double x,
                                 double self_avail) {
    const auto it = std::lower_bound(sorted_avail.begin(), sorted_avail.end(), x);
    std::int64_t below = it - sorted_avail.begin();
    if (self_avail < x) {
        --below;
    }
    return 1 + below;
}

std::vector<double> sorted_avail_probabilities(const Cohort& cohort) {
    std::vector<double> probs(cohort.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        probs[i] = sigmoid(cohort.avail_scores()[i]);
    }
    std::sort(probs.begin(), probs.end());
    return probs;
}

}  // namespace

double score_true_kl(const ScoreRecord& record) {
    return bernoulli_kl(sigmoid(record.s_avail), sigmoid(record.s_acquired));
}

double score_true_uncertainty_reduction(const ScoreRecord& record) {
    return binary_entropy(sigmoid(record.s_avail)) - binary_entropy(sigmoid(record.s_acquired));
}

double score_expected_probability(const ScoreRecord& record) {
    require_imputations(record, "score_expected_probability");
    return imputation_mean(record, [](double s) { return sigmoid(s); });
}

double score_expected_uncertainty_reduction(const ScoreRecord& record) {
    require_imputations(record, "score_expected_uncertainty_reduction");
    // Mean of the imputed entropies, not the entropy of the mean.
    return binary_entropy(sigmoid(record.s_avail)) -
           imputation_mean(record, [](double s) { return binary_entropy(sigmoid(s)); });
}

double score_expected_kl(const ScoreRecord& record) {
    require_imputations(record, "score_expected_kl");
    const double p_avail = sigmoid(record.s_avail);
    return imputation_mean(record,
                           [p_avail](double s) { return bernoulli_kl(p_avail, sigmoid(s)); });
}

double score_baseline_uncertainty(const ScoreRecord& record) {
    return binary_entropy(sigmoid(record.s_avail));
}

double score_baseline_probability(const ScoreRecord& record) {
    return sigmoid(record.s_avail);
}

std::vector<double> score_true_rank_change(const Cohort& cohort) {
    if (cohort.size() < 2) {
        throw PreconditionError("score_true_rank_change: needs at least two samples");
    }
    const std::vector<double> sorted = sorted_avail_probabilities(cohort);
    std::vector<double> out(cohort.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        const double p_avail = sigmoid(cohort.avail_scores()[i]);
        const double p_acq = sigmoid(cohort.acquired_scores()[i]);
        const std::int64_t before = rank_excluding_self(sorted, p_avail, p_avail);
        const std::int64_t after = rank_excluding_self(sorted, p_acq, p_avail);
        out[i] = static_cast<double>(std::llabs(after - before));
    }
    return out;
}

std::vector<double> score_expected_rank_change(const Cohort& cohort) {
    if (cohort.size() < 2) {
        throw PreconditionError("score_expected_rank_change: needs at least two samples");
    }
    if (cohort.imputation_count() == 0) {
        throw PreconditionError("score_expected_rank_change: cohort has no imputed scores");
    }
    const std::vector<double> sorted = sorted_avail_probabilities(cohort);
    std::vector<double> out(cohort.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        const ScoreRecord& record = cohort.record(i);
        const double p_avail = sigmoid(record.s_avail);
        const std::int64_t before = rank_excluding_self(sorted, p_avail, p_avail);
        double sum = 0.0;
        for (double s : record.s_imp) {
            const std::int64_t after = rank_excluding_self(sorted, sigmoid(s), p_avail);
            sum += static_cast<double>(std::llabs(after - before));
        }
        out[i] = sum / static_cast<double>(record.s_imp.size());
    }
    return out;
}

std::vector<double> score_random(std::size_t n, std::uint64_t seed) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = unit_double(splitmix64_at(seed, i));
    }
    return out;
}

std::vector<double> score_cohort(const Cohort& cohort, StrategyKind kind, std::uint64_t seed) {
    if (is_oracle(kind)) {
        throw PreconditionError("score_cohort: oracle strategies rank via greedy selection");
    }
    if (needs_imputations(kind) && cohort.imputation_count() == 0) {
        throw ConfigError(std::string("strategy ") + std::string(strategy_id(kind)) +
                          " requires imputed scores but the cohort has none");
    }
    switch (kind) {
        case StrategyKind::TrueRankChange:
            return score_true_rank_change(cohort);
        case StrategyKind::ExpectedRankChange:
            return score_expected_rank_change(cohort);
        case StrategyKind::Random:
            return score_random(cohort.size(), seed);
        default:
            break;
    }
    double (*scorer)(const ScoreRecord&) = nullptr;
    switch (kind) {
        case StrategyKind::TrueKl: scorer = score_true_kl; break;
        case StrategyKind::TrueUncertaintyReduction: scorer = score_true_uncertainty_reduction; break;
        case StrategyKind::ExpectedKl: scorer = score_expected_kl; break;
        case StrategyKind::ExpectedProbability: scorer = score_expected_probability; break;
        case StrategyKind::ExpectedUncertaintyReduction:
            scorer = score_expected_uncertainty_reduction;
            break;
        case StrategyKind::BaselineUncertainty: scorer = score_baseline_uncertainty; break;
        case StrategyKind::BaselineProbability: scorer = score_baseline_probability; break;
        default:
            throw PreconditionError("score_cohort: unhandled strategy");
    }
    std::vector<double> out(cohort.size());
    for (std::size_t i = 0; i < cohort.size(); ++i) {
        out[i] = scorer(cohort.record(i));
    }
    return out;
}

std::vector<std::size_t> select_top(std::span<const double> scores, std::size_t budget) {
    if (budget > scores.size()) {
        throw PreconditionError("select_top: budget " + std::to_string(budget) +
                                " exceeds sample count " + std::to_string(scores.size()));
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    order.resize(budget);
    return order;
}

}  // namespace cama
