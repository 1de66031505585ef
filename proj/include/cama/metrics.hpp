#pragma once

#include <span>

namespace cama {

// Epsilon used to clamp the denominator distribution in bernoulli_kl.
inline constexpr double kKlEpsilon = 1e-12;

// Logistic function. Throws DomainError for non-finite input.
double sigmoid(double logit);

// Pairwise AUROC over binary labels and real scores: the fraction of
// (positive, negative) pairs where the positive outranks the negative,
// with half credit for exact score ties. Ties use exact floating-point
// equality; scores arrive as stored file values, so this is reproducible.
// Throws UndefinedMetricError when either class is absent.
double auroc(std::span<const int> labels, std::span<const double> scores);

// Step-sum AUPRC over probabilities: PR points are formed at each unique
// threshold in descending order and summed as sum_k (R_k - R_{k-1}) P_k
// with R_0 = 0. No interpolation between points. Throws
// UndefinedMetricError when there are no positive samples.
double auprc_from_probabilities(std::span<const int> labels,
                                std::span<const double> probabilities);

// AUPRC over logits; converts through sigmoid first.
double auprc(std::span<const int> labels, std::span<const double> logits);

// Binary entropy in bits, with the 0*log2(0) = 0 endpoint convention.
double binary_entropy(double p);

// KL divergence in bits between Bernoulli(p) and Bernoulli(q). q is
// clamped to [kKlEpsilon, 1 - kKlEpsilon] before division so saturated
// probabilities in the denominator never produce infinities; p is left
// untouched.
double bernoulli_kl(double p, double q);

}  // namespace cama
