#include "cama/rank_index.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cama/errors.hpp"

namespace cama {

ScoreIndex::ScoreIndex(std::span<const int> labels, std::span<const double> scores,
                       std::span<const double> extra_values)
    : trees_{detail::FenwickTree(0), detail::FenwickTree(0)} {
    if (labels.size() != scores.size()) {
        throw PreconditionError("ScoreIndex: labels and scores differ in length");
    }
    if (labels.empty()) {
        throw PreconditionError("ScoreIndex: empty cohort");
    }

    domain_.reserve(scores.size() + extra_values.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i])) {
            throw DomainError("ScoreIndex: score at index " + std::to_string(i) +
                              " is not finite");
        }
        domain_.push_back(scores[i]);
    }
    for (double v : extra_values) {
        if (!std::isfinite(v)) {
            throw DomainError("ScoreIndex: extra domain value is not finite");
        }
        domain_.push_back(v);
    }
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());

    trees_[0] = detail::FenwickTree(domain_.size());
    trees_[1] = detail::FenwickTree(domain_.size());
    labels_.assign(labels.begin(), labels.end());
    positions_.resize(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::size_t cls = check_class(labels_[i]);
        const std::size_t pos = domain_position(scores[i], "ScoreIndex");
        positions_[i] = pos;
        trees_[cls].add(pos, 1);
        ++totals_[cls];
    }
}

std::size_t ScoreIndex::check_class(int label_class) {
    if (label_class != 0 && label_class != 1) {
        throw DomainError("ScoreIndex: class must be 0 or 1");
    }
    return static_cast<std::size_t>(label_class);
}

std::size_t ScoreIndex::domain_position(double value, const char* op) const {
    const auto it = std::lower_bound(domain_.begin(), domain_.end(), value);
    if (it == domain_.end() || *it != value) {
        throw DomainError(std::string(op) + ": value " + std::to_string(value) +
                          " is not in the compressed domain");
    }
    return static_cast<std::size_t>(it - domain_.begin());
}

ScoreIndex::CmpCounts ScoreIndex::count_cmp(int label_class, double value) const {
    const std::size_t cls = check_class(label_class);
    const std::size_t pos = domain_position(value, "count_cmp");
    CmpCounts counts;
    counts.below = trees_[cls].prefix(pos);
    counts.equal = trees_[cls].prefix(pos + 1) - counts.below;
    counts.above = totals_[cls] - counts.below - counts.equal;
    return counts;
}

void ScoreIndex::reassign(std::size_t sample_id, double new_score) {
    if (sample_id >= positions_.size()) {
        throw NotFoundError("reassign: unknown sample id " + std::to_string(sample_id));
    }
    const std::size_t pos = domain_position(new_score, "reassign");
    const std::size_t cls = static_cast<std::size_t>(labels_[sample_id]);
    if (pos == positions_[sample_id]) {
        return;
    }
    trees_[cls].add(positions_[sample_id], -1);
    trees_[cls].add(pos, 1);
    positions_[sample_id] = pos;
}

double ScoreIndex::current_score(std::size_t sample_id) const {
    if (sample_id >= positions_.size()) {
        throw NotFoundError("current_score: unknown sample id " + std::to_string(sample_id));
    }
    return domain_[positions_[sample_id]];
}

double ScoreIndex::auroc() const {
    if (totals_[0] == 0 || totals_[1] == 0) {
        throw UndefinedMetricError("ScoreIndex::auroc: cohort contains a single class");
    }
    std::int64_t half_units = 0;  // 2*wins + ties over (positive, negative) pairs
    for (std::size_t i = 0; i < positions_.size(); ++i) {
        if (labels_[i] != 1) {
            continue;
        }
        const std::int64_t below = trees_[0].prefix(positions_[i]);
        const std::int64_t below_or_equal = trees_[0].prefix(positions_[i] + 1);
        half_units += below + below_or_equal;
    }
    return static_cast<double>(half_units) /
           (2.0 * static_cast<double>(totals_[1]) * static_cast<double>(totals_[0]));
}

}  // namespace cama
