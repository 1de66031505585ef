#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cama {

// One sample's scores: the logit from the modalities already observed,
// the logit with the extra modality acquired, and K imputed logits that
// estimate the acquired one without acquiring it.
struct ScoreRecord {
    std::int64_t id = 0;
    int label = 0;
    double s_avail = 0.0;
    double s_acquired = 0.0;
    std::vector<double> s_imp;
};

// The full set of samples ranked and evaluated jointly. Validates on
// construction: uniform K across records, unique non-negative ids,
// binary labels, finite scores. Internally samples are addressed by row
// position (0-based), which is also the tie-breaking order.
class Cohort {
public:
    explicit Cohort(std::vector<ScoreRecord> records);

    std::size_t size() const { return records_.size(); }
    std::size_t imputation_count() const { return k_; }

    const ScoreRecord& record(std::size_t i) const { return records_[i]; }
    const std::vector<ScoreRecord>& records() const { return records_; }

    std::span<const int> labels() const { return labels_; }
    std::span<const double> avail_scores() const { return avail_; }
    std::span<const double> acquired_scores() const { return acquired_; }

    std::int64_t positives() const { return positives_; }
    std::int64_t negatives() const { return static_cast<std::int64_t>(size()) - positives_; }

private:
    std::vector<ScoreRecord> records_;
    std::vector<int> labels_;
    std::vector<double> avail_;
    std::vector<double> acquired_;
    std::size_t k_ = 0;
    std::int64_t positives_ = 0;
};

}  // namespace cama
