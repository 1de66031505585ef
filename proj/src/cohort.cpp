#include "cama/cohort.hpp"

#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>

#include "cama/errors.hpp"

namespace cama {

Cohort::Cohort(std::vector<ScoreRecord> records) : records_(std::move(records)) {
    if (records_.empty()) {
        throw PreconditionError("Cohort: at least one sample required");
    }
    k_ = records_[0].s_imp.size();

    labels_.reserve(records_.size());
    avail_.reserve(records_.size());
    acquired_.reserve(records_.size());
    std::unordered_set<std::int64_t> seen_ids;
    seen_ids.reserve(records_.size());

    for (std::size_t i = 0; i < records_.size(); ++i) {
        const ScoreRecord& r = records_[i];
        if (r.id < 0) {
            throw DataError("Cohort: negative id at row " + std::to_string(i));
        }
        if (!seen_ids.insert(r.id).second) {
            throw DataError("Cohort: duplicate id " + std::to_string(r.id) + " at row " +
                            std::to_string(i));
        }
        if (r.label != 0 && r.label != 1) {
            throw DataError("Cohort: label not in {0,1} at row " + std::to_string(i));
        }
        if (r.s_imp.size() != k_) {
            throw DataError("Cohort: row " + std::to_string(i) + " has " +
                            std::to_string(r.s_imp.size()) + " imputed scores, expected " +
                            std::to_string(k_));
        }
        if (!std::isfinite(r.s_avail) || !std::isfinite(r.s_acquired)) {
            throw DataError("Cohort: non-finite score at row " + std::to_string(i));
        }
        for (double s : r.s_imp) {
            if (!std::isfinite(s)) {
                throw DataError("Cohort: non-finite imputed score at row " + std::to_string(i));
            }
        }
        labels_.push_back(r.label);
        avail_.push_back(r.s_avail);
        acquired_.push_back(r.s_acquired);
        positives_ += r.label;
    }
}

}  // namespace cama
