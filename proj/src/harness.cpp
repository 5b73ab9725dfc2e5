#include "elite_surge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace elite_surge {

namespace fs = std::filesystem;

ConfigError::ConfigError(int line_no, std::string field_name, const std::string& message)
    : std::runtime_error("config line " + std::to_string(line_no) +
                         (field_name.empty() ? std::string() : " (" + field_name + ")") + ": " +
                         message),
      line(line_no),
      field(std::move(field_name)) {}

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, sep))
        parts.push_back(trim(item));
    return parts;
}

BackendKind parse_backend(const std::string& name, int line) {
    if (name == "ga")
        return BackendKind::GA;
    if (name == "de")
        return BackendKind::DE;
    if (name == "cmaes")
        return BackendKind::CMAES;
    throw ConfigError(line, "backends", "unknown backend '" + name + "'");
}

bool parse_bool(const std::string& value, const std::string& key, int line) {
    if (value == "true")
        return true;
    if (value == "false")
        return false;
    throw ConfigError(line, key, "expected true or false, got '" + value + "'");
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "elite-surge-config v1")
        throw ConfigError(1, "", "missing version header 'elite-surge-config v1'");

    ExperimentConfig config;
    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, "", "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty())
            throw ConfigError(line_no, "", "empty key");
        if (!seen.insert(key).second)
            throw ConfigError(line_no, key, "duplicate key");

        try {
            if (key == "suite_seed") {
                config.suite_seed = std::stoull(value);
            } else if (key == "dimensions") {
                config.dimensions.clear();
                for (const auto& item : split(value, ',')) {
                    const int d = std::stoi(item);
                    if (d != 2 && d != 5 && d != 10)
                        throw ConfigError(line_no, key, "dimensions must be among {2, 5, 10}");
                    config.dimensions.push_back(d);
                }
                if (config.dimensions.empty())
                    throw ConfigError(line_no, key, "at least one dimension required");
            } else if (key == "trials") {
                config.trials = std::stoi(value);
                if (config.trials < 2)
                    throw ConfigError(line_no, key, "trials must be >= 2");
            } else if (key == "backends") {
                config.backends.clear();
                for (const auto& item : split(value, ','))
                    config.backends.push_back(parse_backend(item, line_no));
                if (config.backends.empty())
                    throw ConfigError(line_no, key, "at least one backend required");
            } else if (key == "problems") {
                config.problems = split(value, ',');
            } else if (key == "output_dir") {
                config.output_dir = value;
            } else if (key == "parallelism") {
                config.parallelism = std::stoi(value);
                if (config.parallelism < 1)
                    throw ConfigError(line_no, key, "parallelism must be >= 1");
            } else if (key == "epsilon") {
                config.epsilon = std::stod(value);
                if (config.epsilon < 0.0 || config.epsilon > 1.0)
                    throw ConfigError(line_no, key, "epsilon must lie in [0, 1]");
            } else if (key == "acquisition") {
                if (value != "epsilon_greedy" && value != "ei" && value != "pi" && value != "ucb")
                    throw ConfigError(line_no, key,
                                      "expected epsilon_greedy, ei, pi, or ucb");
                config.acquisition = value;
            } else if (key == "pool_size") {
                config.pool_size = std::stoi(value);
                if (config.pool_size < 2)
                    throw ConfigError(line_no, key, "pool_size must be >= 2");
            } else if (key == "elite_counts_in_budget") {
                config.elite_counts_in_budget = parse_bool(value, key, line_no);
            } else if (key == "surrogate_data") {
                if (value != "current_generation" && value != "cumulative_archive")
                    throw ConfigError(line_no, key,
                                      "expected current_generation or cumulative_archive");
                config.surrogate_data = value;
            } else {
                throw ConfigError(line_no, key, "unknown key");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError(line_no, key, "could not parse value '" + value + "'");
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError(0, "", "cannot open config file '" + path + "'");
    return parse_config(in);
}

HybridConfig ExperimentConfig::hybrid_config(BackendKind backend, bool hybrid_enabled) const {
    HybridConfig hc;
    hc.backend = backend;
    hc.hybrid_enabled = hybrid_enabled;
    if (acquisition == "epsilon_greedy")
        hc.acquisition = AcquisitionSpec::epsilon_greedy(epsilon);
    else if (acquisition == "ei")
        hc.acquisition = AcquisitionSpec::expected_improvement();
    else if (acquisition == "pi")
        hc.acquisition = AcquisitionSpec::probability_of_improvement();
    else
        hc.acquisition = AcquisitionSpec::upper_confidence_bound();
    hc.pool_size = pool_size;
    hc.elite_counts_in_budget = elite_counts_in_budget;
    hc.surrogate_data = surrogate_data == "cumulative_archive"
                            ? HybridConfig::SurrogateData::CumulativeArchive
                            : HybridConfig::SurrogateData::CurrentGeneration;
    return hc;
}

std::uint64_t trial_seed(std::uint64_t suite_seed, int trial_index) {
    return suite_seed * 1000000ULL + static_cast<std::uint64_t>(trial_index);
}

std::string backend_token(BackendKind kind, bool hybrid) {
    return (hybrid ? "h" : "") + std::string(backend_name(kind));
}

std::string trial_filename(const std::string& problem_id, BackendKind kind, bool hybrid,
                           int dimension, int trial_index) {
    return problem_id + "_" + backend_token(kind, hybrid) + "_" + std::to_string(dimension) +
           "d_seed" + std::to_string(trial_index) + ".csv";
}

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_trial_csv(std::ostream& out, const TrialRecord& record) {
    out << "# seed=" << record.seed << "\n";
    out << "evaluation_index,best_so_far\n";
    for (std::size_t i = 0; i < record.history.size(); ++i)
        out << (i + 1) << ',' << format_double(record.history[i]) << "\n";
}

TrialCsv read_trial_csv(std::istream& in) {
    TrialCsv csv;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# seed=", 0) != 0)
        throw std::runtime_error("trial CSV missing seed header");
    csv.seed = std::stoull(line.substr(7));
    if (!std::getline(in, line) || line != "evaluation_index,best_so_far")
        throw std::runtime_error("trial CSV missing column header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed trial CSV row");
        double value = 0.0;
        const char* begin = line.data() + comma + 1;
        const char* end = line.data() + line.size();
        const auto parsed = std::from_chars(begin, end, value);
        if (parsed.ec != std::errc())
            throw std::runtime_error("malformed best_so_far value");
        csv.best_so_far.push_back(value);
    }
    return csv;
}

namespace {

struct TrialJob {
    const BenchmarkProblem* problem;
    BackendKind backend;
    bool hybrid;
    int trial_index;
    fs::path path;
};

void execute_trial(const ExperimentConfig& config, const TrialJob& job) {
    const HybridConfig hc = config.hybrid_config(job.backend, job.hybrid);
    const TrialRecord record =
        run_trial(*job.problem, hc, trial_seed(config.suite_seed, job.trial_index));

    const fs::path tmp = job.path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        write_trial_csv(out, record);
        if (!out)
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, job.path);
}

int env_parallelism(int configured) {
    if (const char* env = std::getenv("ELITE_SURGE_THREADS")) {
        const int value = std::atoi(env);
        if (value >= 1)
            return value;
    }
    return configured;
}

}  // namespace

RunSummary run_experiment(const ExperimentConfig& config) {
    fs::create_directories(config.output_dir);

    // suites per dimension, filtered
    std::map<int, std::vector<BenchmarkProblem>> suites;
    for (const int d : config.dimensions) {
        std::vector<BenchmarkProblem> suite = make_suite(config.suite_seed, d);
        if (!config.problems.empty()) {
            for (const auto& wanted : config.problems) {
                if (std::none_of(suite.begin(), suite.end(),
                                 [&wanted](const BenchmarkProblem& p) {
                                     return p.id() == wanted;
                                 }))
                    throw ConfigError(0, "problems", "unknown problem id '" + wanted + "'");
            }
            std::erase_if(suite, [&config](const BenchmarkProblem& p) {
                return std::find(config.problems.begin(), config.problems.end(), p.id()) ==
                       config.problems.end();
            });
        }
        suites.emplace(d, std::move(suite));
    }

    {
        std::ofstream manifest(fs::path(config.output_dir) / "manifest.txt", std::ios::binary);
        if (!manifest)
            throw std::runtime_error("cannot write manifest");
        bool first = true;
        for (const auto& [d, suite] : suites) {
            if (first) {
                write_suite_manifest(manifest, suite, config.suite_seed);
                first = false;
            } else {
                // extra dimensions append rows under the same header
                std::ostringstream rows;
                write_suite_manifest(rows, suite, config.suite_seed);
                std::istringstream all(rows.str());
                std::string line;
                std::getline(all, line);
                std::getline(all, line);
                while (std::getline(all, line))
                    manifest << line << "\n";
            }
        }
        if (!manifest)
            throw std::runtime_error("manifest write failed");
    }

    std::vector<TrialJob> jobs;
    RunSummary summary;
    for (const auto& [d, suite] : suites) {
        for (const auto& problem : suite) {
            for (const BackendKind backend : config.backends) {
                for (const bool hybrid : {true, false}) {
                    for (int t = 0; t < config.trials; ++t) {
                        const fs::path path =
                            fs::path(config.output_dir) /
                            trial_filename(problem.id(), backend, hybrid, d, t);
                        if (fs::exists(path)) {
                            summary.skipped += 1;
                            continue;
                        }
                        jobs.push_back(TrialJob{&problem, backend, hybrid, t, path});
                    }
                }
            }
        }
    }

    const int workers =
        std::max(1, std::min<int>(env_parallelism(config.parallelism),
                                  static_cast<int>(jobs.size() == 0 ? 1 : jobs.size())));
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::string first_error;
    const auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= jobs.size())
                return;
            try {
                execute_trial(config, jobs[index]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (first_error.empty())
                    first_error = e.what();
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
    }
    if (!first_error.empty())
        throw std::runtime_error(first_error);

    summary.executed = static_cast<std::int64_t>(jobs.size());
    return summary;
}

namespace {

struct ParsedFilename {
    std::string problem_id;
    BackendKind backend;
    bool hybrid;
    int dimension;
    int trial_index;
};

bool parse_trial_filename(const std::string& name, ParsedFilename& out) {
    if (name.size() < 5 || name.substr(name.size() - 4) != ".csv")
        return false;
    const std::string stem = name.substr(0, name.size() - 4);
    const auto seed_pos = stem.rfind("_seed");
    if (seed_pos == std::string::npos)
        return false;
    const auto d_pos = stem.rfind('_', seed_pos - 1);
    if (d_pos == std::string::npos)
        return false;
    const auto algo_pos = stem.rfind('_', d_pos - 1);
    if (algo_pos == std::string::npos)
        return false;

    out.problem_id = stem.substr(0, algo_pos);
    const std::string algo = stem.substr(algo_pos + 1, d_pos - algo_pos - 1);
    const std::string dim = stem.substr(d_pos + 1, seed_pos - d_pos - 1);
    const std::string trial = stem.substr(seed_pos + 5);
    if (dim.size() < 2 || dim.back() != 'd')
        return false;
    try {
        out.dimension = std::stoi(dim.substr(0, dim.size() - 1));
        out.trial_index = std::stoi(trial);
    } catch (const std::exception&) {
        return false;
    }
    std::string base = algo;
    out.hybrid = !algo.empty() && algo.front() == 'h';
    if (out.hybrid)
        base = algo.substr(1);
    if (base == "ga")
        out.backend = BackendKind::GA;
    else if (base == "de")
        out.backend = BackendKind::DE;
    else if (base == "cmaes")
        out.backend = BackendKind::CMAES;
    else
        return false;
    return true;
}

}  // namespace

Report build_report(const std::string& results_dir) {
    const fs::path dir(results_dir);
    std::ifstream manifest_in(dir / "manifest.txt");
    if (!manifest_in)
        throw std::runtime_error("no manifest.txt in '" + results_dir + "'");
    const std::vector<ManifestEntry> manifest = read_suite_manifest(manifest_in);
    if (manifest.empty())
        throw std::runtime_error("manifest is empty");

    // optimum per (id, dimension), reconstructed from the manifest seed
    std::map<std::pair<std::string, int>, double> optimum;
    std::map<std::pair<std::string, int>, std::size_t> suite_order;
    {
        std::set<int> dims;
        for (const auto& entry : manifest)
            dims.insert(entry.dimension);
        for (const int d : dims) {
            const auto suite = make_suite(manifest.front().seed, d);
            for (std::size_t i = 0; i < suite.size(); ++i) {
                optimum[{suite[i].id(), d}] = suite[i].optimum_value();
                suite_order[{suite[i].id(), d}] = i;
            }
        }
    }

    struct CellSamples {
        std::vector<double> hybrid, baseline;
    };
    std::map<std::tuple<int, std::size_t, std::string, int>, CellSamples> cells;

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file())
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        ParsedFilename parsed;
        if (!parse_trial_filename(file.filename().string(), parsed))
            continue;
        const auto opt = optimum.find({parsed.problem_id, parsed.dimension});
        if (opt == optimum.end())
            continue;  // not part of the manifest suite
        std::ifstream in(file);
        if (!in)
            continue;
        const TrialCsv csv = read_trial_csv(in);
        if (csv.best_so_far.empty())
            continue;
        const double final_error = csv.best_so_far.back() - opt->second;
        const auto key = std::make_tuple(parsed.dimension,
                                         suite_order.at({parsed.problem_id, parsed.dimension}),
                                         parsed.problem_id, static_cast<int>(parsed.backend));
        auto& samples = cells[key];
        (parsed.hybrid ? samples.hybrid : samples.baseline).push_back(final_error);
    }

    Report report;
    for (const auto& [key, samples] : cells) {
        const auto& [dimension, order, problem_id, backend_int] = key;
        const auto backend = static_cast<BackendKind>(backend_int);
        if (samples.hybrid.size() < 2 || samples.baseline.size() < 2) {
            report.missing.push_back(problem_id + " " + std::to_string(dimension) + "d " +
                                     backend_name(backend));
            continue;
        }
        ReportCell cell;
        cell.problem_id = problem_id;
        cell.dimension = dimension;
        cell.backend = backend;
        cell.verdict = classify(samples.hybrid, samples.baseline);
        cell.hybrid_trials = static_cast<int>(samples.hybrid.size());
        cell.baseline_trials = static_cast<int>(samples.baseline.size());
        report.cells.push_back(std::move(cell));
    }
    return report;
}

void format_report_text(const Report& report, std::ostream& out) {
    std::set<int> dims;
    for (const auto& cell : report.cells)
        dims.insert(cell.dimension);

    for (const int d : dims) {
        out << "== " << d << "-D ==\n";
        std::vector<std::string> problems;
        for (const auto& cell : report.cells)
            if (cell.dimension == d &&
                std::find(problems.begin(), problems.end(), cell.problem_id) == problems.end())
                problems.push_back(cell.problem_id);

        out << "problem      ";
        for (const BackendKind b : {BackendKind::GA, BackendKind::DE, BackendKind::CMAES}) {
            std::string header = backend_token(b, true) + " vs " + backend_name(b);
            header.resize(28, ' ');
            out << header;
        }
        out << "\n";
        for (const auto& problem : problems) {
            std::string row = problem;
            row.resize(13, ' ');
            out << row;
            for (const BackendKind b : {BackendKind::GA, BackendKind::DE, BackendKind::CMAES}) {
                std::string text = "-";
                for (const auto& cell : report.cells) {
                    if (cell.dimension == d && cell.problem_id == problem && cell.backend == b) {
                        char p_short[32];
                        std::snprintf(p_short, sizeof(p_short), "%.3g",
                                      cell.verdict.p_two_sided);
                        text = std::string(backend_token(b, true)) + " " +
                               significance_symbol(cell.verdict.symbol) + " " + backend_name(b) +
                               " (p=" + p_short + ")";
                        break;
                    }
                }
                text.resize(std::max<std::size_t>(text.size(), 28), ' ');
                out << text;
            }
            out << "\n";
        }
        out << "\n";
    }
    if (!report.missing.empty()) {
        out << "missing cells (need >= 2 trials per arm):\n";
        for (const auto& name : report.missing)
            out << "  " << name << "\n";
    }
}

void format_report_csv(const Report& report, std::ostream& out) {
    out << "problem,dimension,backend,symbol,direction,p_two_sided,u_statistic,hybrid_trials,"
           "baseline_trials\n";
    for (const auto& cell : report.cells) {
        out << cell.problem_id << ',' << cell.dimension << ',' << backend_name(cell.backend) << ','
            << significance_name(cell.verdict.symbol) << ','
            << direction_name(cell.verdict.direction) << ','
            << format_double(cell.verdict.p_two_sided) << ','
            << format_double(cell.verdict.u_statistic) << ',' << cell.hybrid_trials << ','
            << cell.baseline_trials << "\n";
    }
    for (const auto& name : report.missing)
        out << "# missing: " << name << "\n";
}

int cmd_run(const std::string& config_path, std::ostream& diagnostics) {
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const RunSummary summary = run_experiment(config);
        diagnostics << "ran " << summary.executed << " trial(s), skipped " << summary.skipped
                    << " already present\n";
        return 0;
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        diagnostics << "run failed: " << e.what() << "\n";
        return 3;
    }
}

int cmd_report(const std::string& results_dir, const std::string& format, std::ostream& out,
               std::ostream& diagnostics) {
    if (format != "text" && format != "csv") {
        diagnostics << "config error: unknown report format '" << format << "'\n";
        return 2;
    }
    try {
        const Report report = build_report(results_dir);
        if (format == "text")
            format_report_text(report, out);
        else
            format_report_csv(report, out);
        return 0;
    } catch (const std::exception& e) {
        diagnostics << "report failed: " << e.what() << "\n";
        return 3;
    }
}

int cmd_list(const std::string& config_path, std::ostream& out, std::ostream& diagnostics) {
    ExperimentConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << "\n";
        return 2;
    }
    for (const int d : config.dimensions) {
        const auto suite = make_suite(config.suite_seed, d);
        out << "suite seed=" << config.suite_seed << " dimension=" << d << "\n";
        out << "id,family,dimension,bias,optimum\n";
        for (const auto& problem : suite) {
            if (!config.problems.empty() &&
                std::find(config.problems.begin(), config.problems.end(), problem.id()) ==
                    config.problems.end())
                continue;
            out << problem.id() << ',' << family_name(problem.family()) << ','
                << problem.dimension() << ',' << format_double(problem.bias()) << ','
                << format_double(problem.optimum_value()) << "\n";
        }
    }
    return 0;
}

}  // namespace elite_surge
