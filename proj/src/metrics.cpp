#include "cama/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "cama/errors.hpp"

namespace cama {

namespace {

struct ClassCounts {
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
};

ClassCounts check_labeled_scores(std::span<const int> labels,
                                 std::span<const double> scores,
                                 const char* op) {
    if (labels.size() != scores.size()) {
        throw PreconditionError(std::string(op) + ": labels and scores differ in length");
    }
    if (labels.empty()) {
        throw PreconditionError(std::string(op) + ": empty cohort");
    }
    ClassCounts counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            ++counts.positives;
        } else if (labels[i] == 0) {
            ++counts.negatives;
        } else {
            throw DomainError(std::string(op) + ": label at index " + std::to_string(i) +
                              " is not 0 or 1");
        }
        if (!std::isfinite(scores[i])) {
            throw DomainError(std::string(op) + ": score at index " + std::to_string(i) +
                              " is not finite");
        }
    }
    return counts;
}

}  // namespace

double sigmoid(double logit) {
    if (!std::isfinite(logit)) {
        throw DomainError("sigmoid: input logit is not finite");
    }
    if (logit >= 0.0) {
        return 1.0 / (1.0 + std::exp(-logit));
    }
    const double e = std::exp(logit);
    return e / (1.0 + e);
}

double auroc(std::span<const int> labels, std::span<const double> scores) {
    const ClassCounts counts = check_labeled_scores(labels, scores, "auroc");
    if (counts.positives == 0 || counts.negatives == 0) {
        throw UndefinedMetricError("auroc: cohort contains a single class");
    }

    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Walk runs of equal score; track favorable pairs in half-units so
    // the accumulation stays integer-exact.
    std::int64_t half_units = 0;  // 2*wins + ties
    std::int64_t negatives_below = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        std::int64_t run_pos = 0;
        std::int64_t run_neg = 0;
        while (j < n && scores[order[j]] == scores[order[i]]) {
            if (labels[order[j]] == 1) {
                ++run_pos;
            } else {
                ++run_neg;
            }
            ++j;
        }
        half_units += run_pos * (2 * negatives_below + run_neg);
        negatives_below += run_neg;
        i = j;
    }
    return static_cast<double>(half_units) /
           (2.0 * static_cast<double>(counts.positives) * static_cast<double>(counts.negatives));
}

double auprc_from_probabilities(std::span<const int> labels,
                                std::span<const double> probabilities) {
    const ClassCounts counts = check_labeled_scores(labels, probabilities, "auprc");
    if (counts.positives == 0) {
        throw UndefinedMetricError("auprc: cohort contains no positive samples");
    }
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] < 0.0 || probabilities[i] > 1.0) {
            throw DomainError("auprc: probability at index " + std::to_string(i) +
                              " outside [0,1]");
        }
    }

    const std::size_t n = labels.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return probabilities[a] > probabilities[b]; });

    // One PR point per unique threshold, descending; samples sharing a
    // threshold enter as a single step.
    double area = 0.0;
    double recall_prev = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && probabilities[order[j]] == probabilities[order[i]]) {
            if (labels[order[j]] == 1) {
                ++tp;
            } else {
                ++fp;
            }
            ++j;
        }
        const double recall = static_cast<double>(tp) / static_cast<double>(counts.positives);
        const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        area += (recall - recall_prev) * precision;
        recall_prev = recall;
        i = j;
    }
    return area;
}

double auprc(std::span<const int> labels, std::span<const double> logits) {
    std::vector<double> probs(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        probs[i] = sigmoid(logits[i]);
    }
    return auprc_from_probabilities(labels, probs);
}

double binary_entropy(double p) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw DomainError("binary_entropy: probability outside [0,1]");
    }
    if (p == 0.0 || p == 1.0) {
        return 0.0;
    }
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double bernoulli_kl(double p, double q) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
        throw DomainError("bernoulli_kl: p outside [0,1]");
    }
    if (!std::isfinite(q) || q < 0.0 || q > 1.0) {
        throw DomainError("bernoulli_kl: q outside [0,1]");
    }
    const double qc = std::clamp(q, kKlEpsilon, 1.0 - kKlEpsilon);
    double div = 0.0;
    if (p > 0.0) {
        div += p * std::log2(p / qc);
    }
    if (p < 1.0) {
        div += (1.0 - p) * std::log2((1.0 - p) / (1.0 - qc));
    }
    return std::max(div, 0.0);
}

}  // namespace cama
