#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace cama {

namespace detail {

// 1-based binary indexed tree over integer counts.
class FenwickTree {
public:
    explicit FenwickTree(std::size_t size) : tree_(size + 1, 0) {}

    void add(std::size_t index, std::int64_t delta) {
        for (std::size_t i = index + 1; i < tree_.size(); i += i & (~i + 1)) {
            tree_[i] += delta;
        }
    }

    // Sum of counts at positions [0, index).
    std::int64_t prefix(std::size_t index) const {
        std::int64_t sum = 0;
        for (std::size_t i = index; i > 0; i -= i & (~i + 1)) {
            sum += tree_[i];
        }
        return sum;
    }

private:
    std::vector<std::int64_t> tree_;
};

}  // namespace detail

// Order-statistic index over a cohort's scores: a compressed domain of
// distinct values with one count tree per class, plus the current score
// assignment per sample. The domain is fixed at build time over the
// union of the initial scores and every value a query or reassignment
// will ever use; imputed scores never enter the index.
//
// Single writer; concurrent readers are fine between writes.
class ScoreIndex {
public:
    struct CmpCounts {
        std::int64_t below = 0;
        std::int64_t equal = 0;
        std::int64_t above = 0;
    };

    // Builds the index with every sample at its initial score.
    // extra_values extends the domain (typically all post-acquisition
    // scores, supplied up front).
    ScoreIndex(std::span<const int> labels, std::span<const double> scores,
               std::span<const double> extra_values);

    // Counts of samples of `label_class` with current score <, ==, > value.
    // The value must be a member of the compressed domain.
    CmpCounts count_cmp(int label_class, double value) const;

    // Moves one sample to a new score; all other samples are unaffected.
    void reassign(std::size_t sample_id, double new_score);

    double current_score(std::size_t sample_id) const;
    std::int64_t class_total(int label_class) const { return totals_[check_class(label_class)]; }
    std::size_t size() const { return positions_.size(); }
    std::size_t domain_size() const { return domain_.size(); }

    // AUROC of the current assignment, from index counts alone:
    // sum over positives of (negatives below + half the negatives equal),
    // normalized by the pair count.
    double auroc() const;

private:
    static std::size_t check_class(int label_class);
    std::size_t domain_position(double value, const char* op) const;

    std::vector<double> domain_;                 // sorted distinct values
    std::array<detail::FenwickTree, 2> trees_;   // per-class counts by domain position
    std::vector<std::size_t> positions_;         // current domain position per sample
    std::vector<int> labels_;
    std::array<std::int64_t, 2> totals_{0, 0};
};

}  // namespace cama
