// Command-line front end: single-feature searches, whole-codebook
// recognition with a brute-force diff, query-count sweeps, and the library
// self-test. Reports are JSON Lines on stdout or --report.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpr/bbht_search.hpp"
#include "qpr/instance.hpp"
#include "qpr/recognizer.hpp"
#include "qpr/report_json.hpp"
#include "qpr/selftest.hpp"
#include "qpr/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConstraint = 1;
constexpr int kExitDiff = 2;
constexpr int kExitSelftest = 3;

struct CommonOptions {
    std::string instance_path;
    std::string engine = "reduced";
    std::uint64_t seed = 0;
    double cap_factor = 8.0;
    double lambda = 1.2;
    std::string report_path;  // empty = stdout
    unsigned jobs = 1;
};

void add_common_flags(CLI::App* cmd, CommonOptions& opt, bool needs_instance) {
    if (needs_instance)
        cmd->add_option("--instance", opt.instance_path, "instance JSON file")->required();
    cmd->add_option("--engine", opt.engine, "simulation engine")
        ->check(CLI::IsMember({"full", "reduced"}))
        ->capture_default_str();
    cmd->add_option("--seed", opt.seed, "root seed; all randomness derives from it")
        ->capture_default_str();
    cmd->add_option("--cap-factor", opt.cap_factor,
                    "query cap = ceil(cap-factor * sqrt(N)) per search")
        ->capture_default_str();
    cmd->add_option("--lambda", opt.lambda, "schedule growth factor, in (1, 4/3)")
        ->capture_default_str();
    cmd->add_option("--report", opt.report_path, "write JSON Lines here instead of stdout");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = one per hardware thread)")
        ->capture_default_str();
}

qpr::SearchConfig config_of(const CommonOptions& opt) {
    if (!std::isfinite(opt.cap_factor))
        throw std::runtime_error("cap-factor must be finite");
    qpr::SearchConfig cfg;
    cfg.lambda = opt.lambda;
    cfg.seed = opt.seed;
    cfg.cap_factor = opt.cap_factor;
    cfg.engine = opt.engine == "full" ? qpr::EngineKind::Full : qpr::EngineKind::Reduced;
    qpr::validate_config(cfg);
    return cfg;
}

class ReportSink {
  public:
    explicit ReportSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open report file: " + path);
        }
    }
    void write(const nlohmann::json& record) {
        (file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout) << record.dump() << "\n";
    }

  private:
    std::ofstream file_;
};

std::vector<std::uint64_t> parse_uint_list(const std::string& csv, const char* what) {
    std::vector<std::uint64_t> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        const std::size_t comma = csv.find(',', pos);
        const std::string item = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoull(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string(what) + ": \"" + item +
                                     "\" is not a nonnegative integer");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::runtime_error(std::string(what) + ": empty list");
    return out;
}

int run_simulate(const CommonOptions& common, std::uint64_t feature,
                 const std::optional<std::uint64_t>& alpha_override) {
    const qpr::Instance inst = qpr::load_instance(common.instance_path);
    const std::uint64_t alpha = alpha_override.value_or(inst.alpha);
    const qpr::QueryContext ctx = qpr::make_query_context(inst.database, feature, alpha, inst.mode);
    const qpr::SearchConfig cfg = config_of(common);
    const qpr::SearchReport report = qpr::run_search(inst.database, ctx, cfg);

    ReportSink sink(common.report_path);
    const qpr::ReportStamp stamp =
        qpr::make_stamp(qpr::instance_digest(inst), cfg, report.query_cap);
    sink.write(qpr::search_record(report, stamp, feature, alpha));
    return kExitOk;
}

int run_recognize(const CommonOptions& common) {
    const qpr::Instance inst = qpr::load_instance(common.instance_path);
    const qpr::SearchConfig cfg = config_of(common);
    const qpr::RecognitionReport report =
        qpr::recognize_all(inst.database, inst.codebook, inst.alpha, inst.mode, cfg, common.jobs);
    const std::vector<qpr::BruteForceEntry> classical =
        qpr::brute_force_recognize(inst.database, inst.codebook, inst.alpha, inst.mode);
    const std::vector<qpr::Discrepancy> diffs = qpr::diff_reports(report, classical);

    ReportSink sink(common.report_path);
    const qpr::ReportStamp stamp = qpr::make_stamp(
        qpr::instance_digest(inst), cfg, qpr::resolve_query_cap(cfg, inst.database.size()));
    for (const qpr::FeatureRecognition& e : report.entries)
        sink.write(qpr::recognition_record(e, stamp, inst.alpha));
    sink.write(qpr::diff_record(diffs, stamp));
    if (!diffs.empty()) {
        std::cerr << "recognition disagrees with the brute-force oracle (" << diffs.size()
                  << " discrepancies)\n";
        return kExitDiff;
    }
    return kExitOk;
}

int run_sweep(const CommonOptions& common, const std::string& n_csv, const std::string& m_csv,
              std::uint64_t trials) {
    const qpr::SearchConfig cfg = config_of(common);
    if (cfg.engine != qpr::EngineKind::Reduced)
        throw std::runtime_error("sweep requires --engine reduced");
    const std::vector<std::uint64_t> n_list = parse_uint_list(n_csv, "--n");
    const std::vector<std::uint64_t> m_list = parse_uint_list(m_csv, "--m");

    ReportSink sink(common.report_path);
    for (std::uint64_t n : n_list) {
        for (std::uint64_t m : m_list) {
            const qpr::SweepRow row = qpr::run_sweep_row(n, m, trials, cfg, common.jobs);
            const std::string digest = qpr::instance_digest(qpr::synthesize_sweep_instance(n, m));
            const qpr::ReportStamp stamp =
                qpr::make_stamp(digest, cfg, qpr::resolve_query_cap(cfg, n));
            sink.write(qpr::sweep_record(row, stamp));
        }
    }
    return kExitOk;
}

int run_selftest_command(const CommonOptions& common) {
    const std::vector<qpr::CheckResult> results = qpr::run_selftest(common.seed);
    ReportSink sink(common.report_path);
    qpr::ReportStamp stamp;
    stamp.instance_digest = "none";
    stamp.seed = common.seed;
    stamp.lambda = common.lambda;
    stamp.cap_factor = common.cap_factor;
    stamp.cap = std::nan("");
    for (const qpr::CheckResult& r : results) {
        sink.write(qpr::selftest_record(r, stamp));
        std::cerr << (r.passed ? "ok   " : "FAIL ") << r.name << " (" << r.detail << ")\n";
    }
    const bool passed = qpr::all_passed(results);
    std::cerr << (passed ? "selftest passed" : "selftest FAILED") << " (" << results.size()
              << " suites)\n";
    return passed ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pattern-recognition search simulator"};
    app.require_subcommand(1);

    CommonOptions sim_opt;
    std::uint64_t sim_feature = 0;
    std::optional<std::uint64_t> sim_alpha;
    CLI::App* simulate = app.add_subcommand("simulate", "run one search for a query feature");
    add_common_flags(simulate, sim_opt, true);
    simulate->add_option("--feature", sim_feature, "query feature to search for")->required();
    simulate->add_option("--alpha", sim_alpha, "similarity threshold (overrides the instance)");

    CommonOptions rec_opt;
    CLI::App* recognize =
        app.add_subcommand("recognize", "recognize every codebook feature and diff vs brute force");
    add_common_flags(recognize, rec_opt, true);

    CommonOptions sweep_opt;
    std::string sweep_n, sweep_m;
    std::uint64_t sweep_trials = 100;
    CLI::App* sweep = app.add_subcommand("sweep", "measure query counts over (N, M) grids");
    add_common_flags(sweep, sweep_opt, false);
    sweep->add_option("--n", sweep_n, "comma-separated database sizes (powers of two)")
        ->required();
    sweep->add_option("--m", sweep_m, "comma-separated marked counts")->required();
    sweep->add_option("--trials", sweep_trials, "searches per (N, M) row")->capture_default_str();

    CommonOptions selftest_opt;
    CLI::App* selftest = app.add_subcommand("selftest", "run the library invariant suites");
    add_common_flags(selftest, selftest_opt, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) return run_simulate(sim_opt, sim_feature, sim_alpha);
        if (recognize->parsed()) return run_recognize(rec_opt);
        if (sweep->parsed()) return run_sweep(sweep_opt, sweep_n, sweep_m, sweep_trials);
        if (selftest->parsed()) return run_selftest_command(selftest_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConstraint;
    }
    return kExitConstraint;
}
