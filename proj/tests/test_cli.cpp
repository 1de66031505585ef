#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cama/cli.hpp"
#include "cama/csv_io.hpp"

namespace fs = std::filesystem;
using cama::cli::run;

namespace {

// Captures stdout for the duration of a CLI call.
class CaptureOut {
public:
    CaptureOut() : old_(std::cout.rdbuf(buffer_.rdbuf())) {}
    ~CaptureOut() { std::cout.rdbuf(old_); }
    std::string text() const { return buffer_.str(); }

private:
    std::ostringstream buffer_;
    std::streambuf* old_;
};

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "cama_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

int run_quiet(const std::vector<std::string>& args, std::string* output = nullptr) {
    CaptureOut capture;
    const int code = run(args);
    if (output != nullptr) {
        *output = capture.text();
    }
    return code;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("generate is byte-deterministic for a fixed seed") {
    const fs::path dir = temp_dir();
    const fs::path a = dir / "gen_a.csv";
    const fs::path b = dir / "gen_b.csv";
    CHECK(run_quiet({"generate", "--n", "100", "--k", "5", "--seed", "7", "--out",
                     a.string()}) == 0);
    CHECK(run_quiet({"generate", "--n", "100", "--k", "5", "--seed", "7", "--out",
                     b.string()}) == 0);
    CHECK(read_file(a) == read_file(b));
    CHECK(run_quiet({"generate", "--n", "100", "--k", "5", "--seed", "8", "--out",
                     b.string()}) == 0);
    CHECK(read_file(a) != read_file(b));
}

TEST_CASE("generate without imputations emits no s_imp columns") {
    const fs::path path = temp_dir() / "gen_k0.csv";
    CHECK(run_quiet({"generate", "--n", "10", "--k", "0", "--out", path.string()}) == 0);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "id,label,s_avail,s_acquired");
}

TEST_CASE("generate rejects invalid flags with a usage error") {
    const fs::path path = temp_dir() / "gen_bad.csv";
    CHECK(run_quiet({"generate", "--prevalence", "1.5", "--out", path.string()}) ==
          cama::cli::kExitUsage);
    CHECK(run_quiet({"generate"}) == cama::cli::kExitUsage);  // missing --out
    CHECK(run_quiet({"generate", "--bogus-flag", "1", "--out", path.string()}) ==
          cama::cli::kExitUsage);
}

TEST_CASE("validate accepts generated files and flags corruption") {
    const fs::path dir = temp_dir();
    const fs::path path = dir / "val.csv";
    REQUIRE(run_quiet({"generate", "--n", "30", "--k", "2", "--out", path.string()}) == 0);
    std::string output;
    CHECK(run_quiet({"validate", path.string()}, &output) == 0);
    CHECK(output.find("OK") != std::string::npos);

    // Corrupt one score.
    std::string contents = read_file(path);
    const std::size_t pos = contents.find('\n') + 1;
    std::ofstream out(path, std::ios::binary);
    out << contents.substr(0, pos) << "0,1,nan,0.5,0.1,0.2\n"
        << contents.substr(contents.find('\n', pos) + 1);
    out.close();
    CHECK(run_quiet({"validate", path.string()}, &output) == cama::cli::kExitData);
    CHECK(output.find("s_avail") != std::string::npos);

    CHECK(run_quiet({"validate", (dir / "missing.csv").string()}) == cama::cli::kExitData);
}

TEST_CASE("evaluate with a two-point grid exports exactly the anchors") {
    const fs::path dir = temp_dir();
    const fs::path cohort = dir / "eval_small.csv";
    const fs::path curves = dir / "eval_small_curves.csv";
    const fs::path report = dir / "eval_small_report.csv";
    REQUIRE(run_quiet({"generate", "--n", "50", "--k", "2", "--seed", "3", "--out",
                       cohort.string()}) == 0);
    CHECK(run_quiet({"evaluate", cohort.string(), "--strategies", "random", "--metrics",
                     "auroc", "--grid-points", "2", "--runs", "1", "--out-curves",
                     curves.string(), "--out-report", report.string()}) == 0);
    const std::vector<cama::CurveRow> rows = cama::read_curves_csv(curves);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fraction == 0.0);
    CHECK(rows[0].value == rows[0].m_pre);
    CHECK(rows[1].fraction == 1.0);
    CHECK(rows[1].value == rows[1].m_post);
}

TEST_CASE("evaluate refuses imputation strategies without s_imp columns") {
    const fs::path dir = temp_dir();
    const fs::path cohort = dir / "eval_k0.csv";
    REQUIRE(run_quiet({"generate", "--n", "30", "--k", "0", "--out", cohort.string()}) == 0);
    CaptureOut capture;
    std::ostringstream errors;
    std::streambuf* old_err = std::cerr.rdbuf(errors.rdbuf());
    const int code = run({"evaluate", cohort.string(), "--strategies", "all",
                          "--out-curves", (dir / "c.csv").string(), "--out-report",
                          (dir / "r.csv").string()});
    std::cerr.rdbuf(old_err);
    CHECK(code == cama::cli::kExitMetricConfig);
    for (const char* name : {"exp_kl", "exp_prob", "exp_uncert", "exp_rank"}) {
        CHECK(errors.str().find(name) != std::string::npos);
    }
}

TEST_CASE("evaluate propagates data and metric errors as exit codes") {
    const fs::path dir = temp_dir();
    CHECK(run_quiet({"evaluate", (dir / "nonexistent.csv").string()}) ==
          cama::cli::kExitData);

    // Single-class cohort: AUROC is undefined.
    const fs::path single = dir / "single_class.csv";
    {
        std::ofstream out(single);
        out << "id,label,s_avail,s_acquired\n0,1,0.1,0.2\n1,1,0.3,0.4\n";
    }
    std::ostringstream errors;
    std::streambuf* old_err = std::cerr.rdbuf(errors.rdbuf());
    const int code = run_quiet({"evaluate", single.string(), "--strategies", "random",
                                "--metrics", "auroc", "--out-curves",
                                (dir / "c2.csv").string(), "--out-report",
                                (dir / "r2.csv").string()});
    std::cerr.rdbuf(old_err);
    CHECK(code == cama::cli::kExitMetricConfig);
}

TEST_CASE("evaluate outputs are byte-identical across runs and thread counts") {
    const fs::path dir = temp_dir();
    const fs::path cohort = dir / "det.csv";
    REQUIRE(run_quiet({"generate", "--n", "60", "--k", "3", "--seed", "11", "--out",
                       cohort.string()}) == 0);
    const auto evaluate_with_threads = [&](const std::string& threads, const fs::path& curves,
                                           const fs::path& report) {
        if (threads.empty()) {
            unsetenv("CAMA_THREADS");
        } else {
            setenv("CAMA_THREADS", threads.c_str(), 1);
        }
        const int code = run_quiet({"evaluate", cohort.string(), "--grid-points", "5",
                                    "--runs", "2", "--seed", "5", "--out-curves",
                                    curves.string(), "--out-report", report.string()});
        unsetenv("CAMA_THREADS");
        return code;
    };
    CHECK(evaluate_with_threads("1", dir / "c_t1.csv", dir / "r_t1.csv") == 0);
    CHECK(evaluate_with_threads("4", dir / "c_t4.csv", dir / "r_t4.csv") == 0);
    CHECK(evaluate_with_threads("", dir / "c_t0.csv", dir / "r_t0.csv") == 0);
    CHECK(read_file(dir / "c_t1.csv") == read_file(dir / "c_t4.csv"));
    CHECK(read_file(dir / "c_t1.csv") == read_file(dir / "c_t0.csv"));
    CHECK(read_file(dir / "r_t1.csv") == read_file(dir / "r_t4.csv"));
    CHECK(read_file(dir / "r_t1.csv") == read_file(dir / "r_t0.csv"));
}

TEST_CASE("evaluate succeeds while logging dropped tasks") {
    const fs::path dir = temp_dir();
    const fs::path cohort = dir / "detrimental.csv";
    {
        // Acquisition strictly hurts: the positives sink below the negatives.
        std::ofstream out(cohort);
        out << "id,label,s_avail,s_acquired\n"
            << "0,1,1.0,-9.0\n1,1,2.0,-8.0\n2,0,-1.0,-1.0\n3,0,-2.0,-2.0\n";
    }
    std::string output;
    const int code = run_quiet({"evaluate", cohort.string(), "--strategies", "random",
                                "--metrics", "auroc", "--grid-points", "3", "--out-curves",
                                (dir / "drop_curves.csv").string(), "--out-report",
                                (dir / "drop_report.csv").string()},
                               &output);
    CHECK(code == 0);
    CHECK(output.find("dropped task") != std::string::npos);
    CHECK(output.find("negative gain") != std::string::npos);
    // Curves are still exported; the gain report holds only the header.
    CHECK(cama::read_curves_csv(dir / "drop_curves.csv").size() == 3);
    std::ifstream report(dir / "drop_report.csv");
    std::string line;
    std::getline(report, line);
    CHECK(!line.empty());
    CHECK(!std::getline(report, line));
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_quiet({}) == cama::cli::kExitUsage);
    CHECK(run_quiet({"unknown-command"}) == cama::cli::kExitUsage);
    CHECK(run_quiet({"evaluate"}) == cama::cli::kExitUsage);
}

TEST_CASE("plot renders curves and rejects malformed input") {
    const fs::path dir = temp_dir();
    const fs::path cohort = dir / "plot_cohort.csv";
    const fs::path curves = dir / "plot_curves.csv";
    const fs::path svg = dir / "plot.svg";
    REQUIRE(run_quiet({"generate", "--n", "40", "--k", "2", "--seed", "2", "--out",
                       cohort.string()}) == 0);
    REQUIRE(run_quiet({"evaluate", cohort.string(), "--strategies", "random,true_kl",
                       "--grid-points", "5", "--out-curves", curves.string(),
                       "--out-report", (dir / "plot_report.csv").string()}) == 0);
    CHECK(run_quiet({"plot", curves.string(), "--out", svg.string()}) == 0);
    const std::string rendered = read_file(svg);
    CHECK(rendered.find("<svg") != std::string::npos);
    CHECK(rendered.find("polyline") != std::string::npos);
    CHECK(rendered.find("random") != std::string::npos);
    CHECK(rendered.find("m_pre") != std::string::npos);

    const fs::path bad = dir / "bad_curves.csv";
    {
        std::ofstream out(bad);
        out << "strategy,metric,task,run,b,value,m_pre,m_post\nrandom,auroc,t,0,xx\n";
    }
    CHECK(run_quiet({"plot", bad.string(), "--out", svg.string()}) == cama::cli::kExitData);
}

TEST_CASE("plot golden output for a frozen tiny input") {
    const fs::path dir = temp_dir();
    const fs::path curves = dir / "golden_curves.csv";
    {
        std::ofstream out(curves);
        out << "strategy,metric,task,run,b,value,m_pre,m_post\n"
            << "oracle_auroc,auroc,demo,0,0,0.25,0.25,0.5\n"
            << "oracle_auroc,auroc,demo,0,0.5,1,0.25,0.5\n"
            << "oracle_auroc,auroc,demo,0,1,0.5,0.25,0.5\n"
            << "random,auroc,demo,0,0,0.25,0.25,0.5\n"
            << "random,auroc,demo,0,0.5,0.4,0.25,0.5\n"
            << "random,auroc,demo,0,1,0.5,0.25,0.5\n";
    }
    const fs::path svg = dir / "golden_plot.svg";
    REQUIRE(run_quiet({"plot", curves.string(), "--out", svg.string()}) == 0);
    const fs::path golden = fs::path(CAMA_TEST_DATA_DIR) / "golden_plot.svg";
    REQUIRE(fs::exists(golden));
    CHECK(read_file(svg) == read_file(golden));
}

TEST_SUITE_END();
