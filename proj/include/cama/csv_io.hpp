#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cama/cohort.hpp"
#include "cama/simulation.hpp"

namespace cama {

// Doubles serialized with 17 significant digits round-trip bit-exactly.
std::string format_double(double value);

// Cohort file: CSV with header id,label,s_avail,s_acquired,s_imp_0,...
// No quoting; K inferred from the header and may be zero.
Cohort read_cohort_csv(const std::filesystem::path& path);
void write_cohort_csv(const std::filesystem::path& path, const Cohort& cohort);

struct ValidationIssue {
    std::size_t row = 0;  // 1-based file line
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    std::size_t n = 0;
    std::size_t k = 0;
    std::int64_t positives = 0;
    std::int64_t negatives = 0;
    bool ok() const { return issues.empty(); }
};

// Schema diagnostics without constructing a Cohort: reports every
// violation with its line number instead of stopping at the first.
ValidationReport validate_cohort_csv(const std::filesystem::path& path);

// Curve export schema: strategy,metric,task,run,b,value,m_pre,m_post.
void write_curves_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows);
std::vector<CurveRow> read_curves_csv(const std::filesystem::path& path);

// Gain report schema:
// strategy,metric,task,g_full_mean,g_full_sem,n_runs,n_dropped_tasks.
void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows);

}  // namespace cama
