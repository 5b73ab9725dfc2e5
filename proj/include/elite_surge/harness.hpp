#pragma once

#include "elite_surge/hybrid.hpp"
#include "elite_surge/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace elite_surge {

/// Experiment description parsed from the versioned key-value config format
/// ("elite-surge-config v1"). Unknown keys are errors. Defaults: dimensions
/// 2/5/10, 30 trials, population 50 x D, budget 1000 x D, epsilon 0.1.
struct ExperimentConfig {
    std::uint64_t suite_seed = 7;
    std::vector<int> dimensions = {2, 5, 10};
    int trials = 30;
    std::vector<BackendKind> backends = {BackendKind::GA, BackendKind::DE, BackendKind::CMAES};
    std::vector<std::string> problems;  // empty -> whole suite
    std::string output_dir = "results";
    int parallelism = 1;

    // hybrid overrides
    double epsilon = 0.1;
    std::string acquisition = "epsilon_greedy";  // epsilon_greedy | ei | pi | ucb
    int pool_size = 0;
    bool elite_counts_in_budget = true;
    std::string surrogate_data = "current_generation";  // or cumulative_archive

    HybridConfig hybrid_config(BackendKind backend, bool hybrid_enabled) const;
};

struct ConfigError : std::runtime_error {
    ConfigError(int line, std::string field, const std::string& message);
    int line;
    std::string field;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// Trial seeds are suite_seed * 10^6 + trial_index.
std::uint64_t trial_seed(std::uint64_t suite_seed, int trial_index);

std::string backend_token(BackendKind kind, bool hybrid);  // "ga" / "hga" / ...
std::string trial_filename(const std::string& problem_id, BackendKind kind, bool hybrid,
                           int dimension, int trial_index);

/// Shortest decimal representation that round-trips the double.
std::string format_double(double value);

void write_trial_csv(std::ostream& out, const TrialRecord& record);

struct TrialCsv {
    std::uint64_t seed = 0;
    std::vector<double> best_so_far;
};
TrialCsv read_trial_csv(std::istream& in);

struct RunSummary {
    std::int64_t executed = 0;
    std::int64_t skipped = 0;
};

/// Runs every (problem x dimension x backend x {hybrid, baseline} x trial)
/// cell, writing one CSV per trial plus the suite manifest. Re-runs skip
/// trials whose file already exists. Throws on write failure.
RunSummary run_experiment(const ExperimentConfig& config);

struct ReportCell {
    std::string problem_id;
    int dimension = 0;
    BackendKind backend = BackendKind::GA;
    ComparisonVerdict verdict;
    int hybrid_trials = 0;
    int baseline_trials = 0;
};

struct Report {
    std::vector<ReportCell> cells;
    std::vector<std::string> missing;  // cells without >= 2 trials per arm
};

/// Pure function of the results directory contents.
Report build_report(const std::string& results_dir);

void format_report_text(const Report& report, std::ostream& out);
void format_report_csv(const Report& report, std::ostream& out);

// CLI entry points; exit codes 0 ok, 2 config error, 3 write failure.
int cmd_run(const std::string& config_path, std::ostream& diagnostics);
int cmd_report(const std::string& results_dir, const std::string& format, std::ostream& out,
               std::ostream& diagnostics);
int cmd_list(const std::string& config_path, std::ostream& out, std::ostream& diagnostics);

}  // namespace elite_surge
