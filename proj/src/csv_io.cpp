#include "cama/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cama/errors.hpp"

namespace cama {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end;
}

bool parse_int64(const std::string& text, std::int64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end;
}

bool parse_uint64(const std::string& text, std::uint64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto result = std::from_chars(begin, end, out);
    return result.ec == std::errc{} && result.ptr == end;
}

std::vector<std::string> expected_cohort_header(std::size_t k) {
    std::vector<std::string> header = {"id", "label", "s_avail", "s_acquired"};
    for (std::size_t i = 0; i < k; ++i) {
        header.push_back("s_imp_" + std::to_string(i));
    }
    return header;
}

// Parses the cohort header, returning K. Throws DataError on mismatch.
std::size_t parse_cohort_header(const std::vector<std::string>& fields,
                                const std::filesystem::path& path) {
    if (fields.size() < 4) {
        throw DataError(path.string() + ": header has " + std::to_string(fields.size()) +
                        " columns, expected at least id,label,s_avail,s_acquired");
    }
    const std::size_t k = fields.size() - 4;
    const std::vector<std::string> expected = expected_cohort_header(k);
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] != expected[i]) {
            throw DataError(path.string() + ": header column " + std::to_string(i + 1) +
                            " is '" + fields[i] + "', expected '" + expected[i] + "'");
        }
    }
    return k;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path.string() + " for reading");
    }
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot open " + path.string() + " for writing");
    }
    return out;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result =
        std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

Cohort read_cohort_csv(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(path.string() + ": empty file");
    }
    const std::size_t k = parse_cohort_header(split_line(line), path);

    std::vector<ScoreRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 4 + k) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": has " +
                            std::to_string(fields.size()) + " columns, expected " +
                            std::to_string(4 + k));
        }
        ScoreRecord r;
        if (!parse_int64(fields[0], r.id) || r.id < 0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": id '" + fields[0] + "' is not a non-negative integer");
        }
        std::int64_t label = 0;
        if (!parse_int64(fields[1], label) || (label != 0 && label != 1)) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": label '" + fields[1] + "' is not 0 or 1");
        }
        r.label = static_cast<int>(label);
        const auto parse_score = [&](const std::string& text, const char* column) {
            double value = 0.0;
            if (!parse_double(text, value) || !std::isfinite(value)) {
                throw DataError(path.string() + ":" + std::to_string(line_no) + ": column " +
                                column + " value '" + text + "' is not a finite number");
            }
            return value;
        };
        r.s_avail = parse_score(fields[2], "s_avail");
        r.s_acquired = parse_score(fields[3], "s_acquired");
        r.s_imp.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            r.s_imp.push_back(
                parse_score(fields[4 + i], ("s_imp_" + std::to_string(i)).c_str()));
        }
        records.push_back(std::move(r));
    }
    if (records.empty()) {
        throw DataError(path.string() + ": no data rows");
    }
    try {
        return Cohort(std::move(records));
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_cohort_csv(const std::filesystem::path& path, const Cohort& cohort) {
    std::ofstream out = open_for_write(path);
    const std::vector<std::string> header = expected_cohort_header(cohort.imputation_count());
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i == 0 ? "" : ",") << header[i];
    }
    out << '\n';
    for (const ScoreRecord& r : cohort.records()) {
        out << r.id << ',' << r.label << ',' << format_double(r.s_avail) << ','
            << format_double(r.s_acquired);
        for (double s : r.s_imp) {
            out << ',' << format_double(s);
        }
        out << '\n';
    }
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

ValidationReport validate_cohort_csv(const std::filesystem::path& path) {
    ValidationReport report;
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        report.issues.push_back({1, "empty file"});
        return report;
    }
    std::size_t k = 0;
    try {
        k = parse_cohort_header(split_line(line), path);
    } catch (const DataError& e) {
        report.issues.push_back({1, e.what()});
        return report;
    }
    report.k = k;

    std::unordered_set<std::int64_t> seen_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 4 + k) {
            report.issues.push_back({line_no, "has " + std::to_string(fields.size()) +
                                                  " columns, expected " +
                                                  std::to_string(4 + k)});
            continue;
        }
        ++report.n;
        std::int64_t id = 0;
        if (!parse_int64(fields[0], id) || id < 0) {
            report.issues.push_back(
                {line_no, "id '" + fields[0] + "' is not a non-negative integer"});
        } else if (!seen_ids.insert(id).second) {
            report.issues.push_back({line_no, "duplicate id " + std::to_string(id)});
        }
        std::int64_t label = 0;
        if (!parse_int64(fields[1], label) || (label != 0 && label != 1)) {
            report.issues.push_back({line_no, "label '" + fields[1] + "' is not 0 or 1"});
        } else if (label == 1) {
            ++report.positives;
        } else {
            ++report.negatives;
        }
        const std::vector<std::string> columns = expected_cohort_header(k);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            double value = 0.0;
            if (!parse_double(fields[i], value) || !std::isfinite(value)) {
                report.issues.push_back({line_no, "column " + columns[i] + " value '" +
                                                      fields[i] + "' is not a finite number"});
            }
        }
    }
    if (report.n == 0) {
        report.issues.push_back({line_no, "no data rows"});
    }
    return report;
}

void write_curves_csv(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
    std::ofstream out = open_for_write(path);
    out << "strategy,metric,task,run,b,value,m_pre,m_post\n";
    for (const CurveRow& row : rows) {
        out << row.strategy << ',' << row.metric << ',' << row.task << ',' << row.run << ','
            << format_double(row.fraction) << ',' << format_double(row.value) << ','
            << format_double(row.m_pre) << ',' << format_double(row.m_post) << '\n';
    }
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

std::vector<CurveRow> read_curves_csv(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(path.string() + ": empty file");
    }
    if (line != "strategy,metric,task,run,b,value,m_pre,m_post") {
        throw DataError(path.string() + ":1: unexpected curves header '" + line + "'");
    }
    std::vector<CurveRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != 8) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": has " +
                            std::to_string(fields.size()) + " columns, expected 8");
        }
        CurveRow row;
        row.strategy = fields[0];
        row.metric = fields[1];
        row.task = fields[2];
        const bool ok = parse_uint64(fields[3], row.run) &&
                        parse_double(fields[4], row.fraction) &&
                        parse_double(fields[5], row.value) &&
                        parse_double(fields[6], row.m_pre) &&
                        parse_double(fields[7], row.m_post);
        if (!ok) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": malformed numeric field");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_report_csv(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
    std::ofstream out = open_for_write(path);
    out << "strategy,metric,task,g_full_mean,g_full_sem,n_runs,n_dropped_tasks\n";
    for (const ReportRow& row : rows) {
        out << row.strategy << ',' << row.metric << ',' << row.task << ','
            << format_double(row.g_full_mean) << ',' << format_double(row.g_full_sem) << ','
            << row.n_runs << ',' << row.n_dropped_tasks << '\n';
    }
    if (!out) {
        throw DataError("failed writing " + path.string());
    }
}

}  // namespace cama
