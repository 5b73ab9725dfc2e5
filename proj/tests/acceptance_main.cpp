// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit status 0 only when all
// criteria hold.

#include "elite_surge/acquisition.hpp"
#include "elite_surge/bench.hpp"
#include "elite_surge/gpr.hpp"
#include "elite_surge/harness.hpp"
#include "elite_surge/hybrid.hpp"
#include "elite_surge/stats.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace elite_surge;

namespace {

constexpr std::uint64_t kSuiteSeed = 7;
constexpr int kTrials = 30;

struct CellKey {
    std::string problem_id;
    BackendKind backend;
    bool operator<(const CellKey& other) const {
        if (problem_id != other.problem_id)
            return problem_id < other.problem_id;
        return static_cast<int>(backend) < static_cast<int>(other.backend);
    }
};

struct CellResult {
    ComparisonVerdict verdict;
    std::vector<double> hybrid_errors;
    std::vector<double> baseline_errors;
};

// Full 2-D suite x 3 backends x 30 paired trials, computed once and shared by
// criteria 1 and 10. Trial seeds follow the harness rule suite_seed*1e6 + t.
const std::map<CellKey, CellResult>& full_grid() {
    static std::map<CellKey, CellResult> grid = [] {
        const auto suite = make_suite(kSuiteSeed, 2);
        struct Job {
            const BenchmarkProblem* problem;
            BackendKind backend;
        };
        std::vector<Job> jobs;
        for (const auto& problem : suite)
            for (const auto backend : {BackendKind::GA, BackendKind::DE, BackendKind::CMAES})
                jobs.push_back({&problem, backend});

        std::map<CellKey, CellResult> out;
        std::mutex out_mutex;
        std::atomic<std::size_t> next{0};
        const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
        auto worker = [&]() {
            while (true) {
                const std::size_t index = next.fetch_add(1);
                if (index >= jobs.size())
                    return;
                const Job& job = jobs[index];
                CellResult cell;
                for (int t = 0; t < kTrials; ++t) {
                    const std::uint64_t seed = trial_seed(kSuiteSeed, t);
                    for (const bool hybrid : {true, false}) {
                        HybridConfig config;
                        config.backend = job.backend;
                        config.hybrid_enabled = hybrid;
                        const TrialRecord record = run_trial(*job.problem, config, seed);
                        (hybrid ? cell.hybrid_errors : cell.baseline_errors)
                            .push_back(record.final_error);
                    }
                }
                cell.verdict = classify(cell.hybrid_errors, cell.baseline_errors);
                std::lock_guard<std::mutex> lock(out_mutex);
                out.emplace(CellKey{job.problem->id(), job.backend}, std::move(cell));
            }
        };
        std::vector<std::thread> threads;
        for (unsigned i = 0; i < workers; ++i)
            threads.emplace_back(worker);
        for (auto& t : threads)
            t.join();
        return out;
    }();
    return grid;
}

std::string cell_text(const CellKey& key, const CellResult& cell) {
    std::ostringstream out;
    out << key.problem_id << "/" << backend_token(key.backend, true) << " vs "
        << backend_name(key.backend) << ": " << significance_symbol(cell.verdict.symbol)
        << " (p=" << cell.verdict.p_two_sided
        << ", dir=" << direction_name(cell.verdict.direction) << ")";
    return out.str();
}

// --- criterion 1: unimodal acceleration on sphere and elliptic, 2-D --------

bool criterion_unimodal_acceleration(std::string& detail) {
    const auto& grid = full_grid();
    bool pass = true;
    std::ostringstream out;
    for (const std::string problem : {"sphere", "elliptic"}) {
        for (const auto backend : {BackendKind::DE, BackendKind::CMAES}) {
            const auto& cell = grid.at(CellKey{problem, backend});
            const bool ok = cell.verdict.symbol == Significance::Better ||
                            cell.verdict.symbol == Significance::MuchBetter;
            pass = pass && ok;
            out << (ok ? "[ok] " : "[X] ") << cell_text(CellKey{problem, backend}, cell) << "  ";
        }
    }
    detail = out.str();
    return pass;
}

// --- criterion 2: ablation identity ----------------------------------------

bool criterion_ablation_identity(std::string& detail) {
    const auto suite = make_suite(kSuiteSeed, 2);
    std::vector<const BenchmarkProblem*> problems;
    for (const auto& problem : suite)
        if (problem.id() == "sphere" || problem.id() == "rastrigin" || problem.id() == "comp_a")
            problems.push_back(&problem);

    int compared = 0;
    for (const auto* problem : problems) {
        for (const auto backend : {BackendKind::GA, BackendKind::DE, BackendKind::CMAES}) {
            const std::uint64_t seed = trial_seed(kSuiteSeed, 11);
            HybridConfig config;
            config.backend = backend;
            config.hybrid_enabled = false;
            const TrialRecord record = run_trial(*problem, config, seed);

            // reference: the plain backend loop, same stream discipline
            TrialRecord reference;
            reference.seed = seed;
            double best = std::numeric_limits<double>::infinity();
            EvaluationBudget budget(2000);
            const ObjectiveFn eval = [&](const Vector& x) {
                budget.consume();
                const double f = problem->value(x);
                best = std::min(best, f);
                reference.history.push_back(best);
                return f;
            };
            Rng rng(derive_seed(seed, 1));
            try {
                if (backend == BackendKind::CMAES) {
                    CmaesState state = cmaes_init(problem->bounds(), 100, 1.3, rng);
                    while (true) {
                        const Population offspring =
                            cmaes_sample(state, problem->bounds(), rng, eval);
                        cmaes_update(state, offspring);
                    }
                } else {
                    Population pop = random_population(100, problem->bounds(), rng, eval);
                    while (true) {
                        pop = backend == BackendKind::GA
                                  ? ga_step(pop, GaParams{}, problem->bounds(), rng, eval)
                                  : de_step(pop, DeParams{}, problem->bounds(), rng, eval);
                    }
                }
            } catch (const BudgetExhausted&) {
            }

            TrialRecord trimmed;
            trimmed.seed = seed;
            trimmed.history = record.history;
            std::ostringstream csv_run, csv_ref;
            write_trial_csv(csv_run, trimmed);
            write_trial_csv(csv_ref, reference);
            if (csv_run.str() != csv_ref.str()) {
                detail = problem->id() + "/" + backend_name(backend) + " diverged";
                return false;
            }
            ++compared;
        }
    }
    detail = std::to_string(compared) + " problem x backend CSVs byte-identical";
    return compared == 9;
}

// --- criterion 3: budget exactness ------------------------------------------

bool criterion_budget_exactness(std::string& detail) {
    struct Case {
        std::string problem_id;
        int dimension;
        BackendKind backend;
    };
    const std::vector<Case> cases{{"sphere", 2, BackendKind::DE},
                                  {"rastrigin", 2, BackendKind::GA},
                                  {"comp_a", 2, BackendKind::CMAES},
                                  {"sphere", 5, BackendKind::DE}};
    for (const auto& c : cases) {
        const auto suite = make_suite(kSuiteSeed, c.dimension);
        const BenchmarkProblem* problem = nullptr;
        for (const auto& p : suite)
            if (p.id() == c.problem_id)
                problem = &p;
        HybridConfig config;
        config.backend = c.backend;
        std::int64_t observed = 0;
        RunOptions options;
        options.evaluation_observer = [&observed](const Vector&, double) { ++observed; };
        const TrialRecord record =
            run_trial(*problem, config, trial_seed(kSuiteSeed, 3), 0, options);
        const std::int64_t expected = 1000 * c.dimension;
        if (record.evaluations != expected ||
            static_cast<std::int64_t>(record.history.size()) != expected ||
            observed != expected) {
            detail = c.problem_id + "/" + backend_name(c.backend) + ": evaluations=" +
                     std::to_string(record.evaluations) + " history=" +
                     std::to_string(record.history.size()) + " observed=" +
                     std::to_string(observed) + " expected=" + std::to_string(expected);
            return false;
        }
    }
    detail = "history length == instrumented count == 1000 x D on 4 configurations";
    return true;
}

// --- criterion 4: EI closed form vs Monte Carlo -----------------------------

bool criterion_ei_monte_carlo(std::string& detail) {
    Rng rng(404);
    double worst_ratio = 0.0;
    for (int triple = 0; triple < 20; ++triple) {
        const double mu = rng.uniform(-3.0, 3.0);
        const double sigma = rng.uniform(0.05, 3.0);
        // incumbent placed in sigma units of the mean so the improvement
        // probability stays estimable by Monte Carlo
        const double incumbent = mu + sigma * rng.uniform(-2.0, 3.0);
        const int draws = 1000000;
        double sum = 0.0, sum_sq = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double y = mu + sigma * rng.normal();
            const double improvement = std::max(incumbent - y, 0.0);
            sum += improvement;
            sum_sq += improvement * improvement;
        }
        const double mc_mean = sum / draws;
        const double mc_se = std::sqrt(
            std::max(0.0, (sum_sq / draws - mc_mean * mc_mean)) / static_cast<double>(draws));
        const double closed = ei_score(mu, sigma, incumbent);
        const double gap = std::fabs(closed - mc_mean);
        if (mc_se == 0.0) {
            if (gap > 1e-12) {
                detail = "zero-variance MC triple disagrees with the closed form";
                return false;
            }
            continue;
        }
        worst_ratio = std::max(worst_ratio, gap / mc_se);
        if (gap > 3.0 * mc_se) {
            std::ostringstream out;
            out << "triple (mu=" << mu << ", sigma=" << sigma << ", f=" << incumbent
                << "): |closed-mc| = " << gap << " > 3 SE = " << 3.0 * mc_se;
            detail = out.str();
            return false;
        }
    }
    std::ostringstream out;
    out << "20 triples x 1e6 draws, worst gap " << worst_ratio << " SE";
    detail = out.str();
    return true;
}

// --- criterion 5: GPR interpolation -----------------------------------------

bool criterion_gpr_interpolation(std::string& detail) {
    Rng rng(505);
    double worst_mu = 0.0, worst_var = 0.0;
    for (int dataset = 0; dataset < 50; ++dataset) {
        const int d = dataset % 2 == 0 ? 1 : 2;
        const int n = 5 + static_cast<int>(rng.below(46));
        const Bounds bounds = uniform_bounds(d, 0.0, 1.0);

        // well-separated inputs
        std::vector<Vector> xs;
        while (static_cast<int>(xs.size()) < n) {
            Vector x(d);
            for (int j = 0; j < d; ++j)
                x[j] = rng.uniform();
            bool ok = true;
            for (const auto& other : xs)
                if ((x - other).norm() < 0.012)
                    ok = false;
            if (ok)
                xs.push_back(std::move(x));
        }

        // smooth random target: sinusoid mixture plus a quadratic bowl
        Vector w1(d), w2(d), center(d);
        for (int j = 0; j < d; ++j) {
            w1[j] = rng.uniform(-2.0, 2.0);
            w2[j] = rng.uniform(-3.0, 3.0);
            center[j] = rng.uniform();
        }
        const double phase1 = rng.uniform(0.0, 2.0 * M_PI);
        const double phase2 = rng.uniform(0.0, 2.0 * M_PI);
        const double curvature = rng.uniform(0.0, 4.0);
        const auto target = [&](const Vector& x) {
            return std::sin(2.0 * M_PI * w1.dot(x) + phase1) +
                   0.6 * std::sin(2.0 * M_PI * w2.dot(x) + phase2) +
                   curvature * (x - center).squaredNorm();
        };

        std::vector<std::pair<Vector, double>> points;
        double y_lo = 1e300, y_hi = -1e300;
        for (const auto& x : xs) {
            const double y = target(x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
            points.emplace_back(x, y);
        }
        const double range = y_hi - y_lo;

        const GprModel model = GprModel::fit(points, bounds);
        const double sf2 = model.kernel_params().signal_variance;
        for (const auto& [x, y] : points) {
            const auto p = model.predict(x);
            worst_mu = std::max(worst_mu, std::fabs(p.mu - y) / range);
            const double var_bound = 1e-6 * sf2 * model.y_sd() * model.y_sd();
            worst_var = std::max(worst_var, var_bound > 0.0
                                                ? (p.sigma * p.sigma) / var_bound
                                                : 0.0);
            if (std::fabs(p.mu - y) > 1e-4 * range) {
                std::ostringstream out;
                out << "dataset " << dataset << " (D=" << d << ", n=" << n
                    << "): |mu - y| = " << std::fabs(p.mu - y) << " > 1e-4 x range " << range;
                detail = out.str();
                return false;
            }
            if (p.sigma * p.sigma > var_bound) {
                std::ostringstream out;
                out << "dataset " << dataset << ": posterior variance " << p.sigma * p.sigma
                    << " above 1e-6 sigma_f^2 y_sd^2 = " << var_bound;
                detail = out.str();
                return false;
            }
        }
    }
    std::ostringstream out;
    out << "50 datasets: worst |mu-y|/range = " << worst_mu
        << ", worst variance ratio = " << worst_var;
    detail = out.str();
    return true;
}

// --- criterion 6: Mann-Whitney correctness ----------------------------------

bool criterion_mann_whitney(std::string& detail) {
    Rng rng(606);
    int cases = 0, gated = 0;
    double worst = 0.0;
    while (cases < 200) {
        const int n = 2 + static_cast<int>(rng.below(13));
        const int m = 2 + static_cast<int>(rng.below(13));
        if (n + m > 16)
            continue;
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(m));
        for (auto& v : a)
            v = static_cast<double>(rng.below(100000));
        for (auto& v : b)
            v = static_cast<double>(40000 + rng.below(100000));
        ++cases;
        const auto approx = mann_whitney_u(a, b);
        const auto exact = mann_whitney_u_exact(a, b);
        if (std::min(approx.p_two_sided, exact.p_two_sided) <= 0.05) {
            ++gated;
            const double gap = std::fabs(approx.p_two_sided - exact.p_two_sided);
            worst = std::max(worst, gap);
            if (gap > 0.02) {
                std::ostringstream out;
                out << "(n=" << n << ", m=" << m << "): |p_normal - p_exact| = " << gap
                    << " > 0.02 (exact " << exact.p_two_sided << ", normal "
                    << approx.p_two_sided << ")";
                detail = out.str();
                return false;
            }
        }
    }

    // exact symmetry identity on 10^4 random (tied) pairs
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(25));
        const int m = 2 + static_cast<int>(rng.below(25));
        std::vector<double> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(m));
        for (auto& v : a)
            v = static_cast<double>(rng.below(8));
        for (auto& v : b)
            v = static_cast<double>(rng.below(8));
        const double u_ab = mann_whitney_u(a, b).u_statistic;
        const double u_ba = mann_whitney_u(b, a).u_statistic;
        if (u_ab + u_ba != static_cast<double>(n) * static_cast<double>(m)) {
            detail = "U symmetry identity violated";
            return false;
        }
    }
    std::ostringstream out;
    out << "200 cases (" << gated << " in the p<=0.05 decision region, worst gap " << worst
        << "); U symmetry exact on 10^4 pairs";
    detail = out.str();
    return true;
}

// --- criterion 7: epsilon-greedy branch frequency ---------------------------

bool criterion_epsilon_frequency(std::string& detail) {
    const Bounds bounds = uniform_bounds(2, -5.0, 5.0);
    Rng data_rng(707);
    std::vector<std::pair<Vector, double>> points;
    for (int i = 0; i < 40; ++i) {
        Vector x(2);
        x << data_rng.uniform(-5.0, 5.0), data_rng.uniform(-5.0, 5.0);
        points.emplace_back(x, x.squaredNorm());
    }
    const GprModel model = GprModel::fit(points, bounds);
    CandidatePool pool = CandidatePool::uniform(bounds, 200, data_rng);
    const AcquisitionSpec spec = AcquisitionSpec::epsilon_greedy(0.1);

    Rng select_rng(708);
    int explored = 0;
    const int selections = 10000;
    for (int i = 0; i < selections; ++i)
        explored += epsilon_greedy_select(model, pool, spec, select_rng).explored ? 1 : 0;
    const double rate = static_cast<double>(explored) / selections;
    std::ostringstream out;
    out << "exploratory rate " << rate << " over 1e4 selections (bound 0.1 +/- 0.009)";
    detail = out.str();
    return std::fabs(rate - 0.1) <= 0.009;
}

// --- criterion 8: CMA-ES sanity ---------------------------------------------

bool criterion_cmaes_sanity(std::string& detail) {
    const int d = 2;
    const Bounds bounds = uniform_bounds(d, -5.0, 5.0);
    const BenchmarkProblem sphere("sanity_sphere", ProblemFamily::Unimodal,
                                  BaseFunction::Sphere, bounds, Vector::Zero(d),
                                  Matrix::Identity(d, d), 0.0);
    const int lambda = 50 * d;
    const std::int64_t budget_max = 1000 * d;
    int hits = 0;
    for (int trial = 0; trial < kTrials; ++trial) {
        Rng rng(derive_seed(trial_seed(kSuiteSeed, trial), 1));
        CmaesState state = cmaes_init(bounds, lambda, 1.3, rng);
        double best = std::numeric_limits<double>::infinity();
        std::int64_t evals = 0;
        const ObjectiveFn eval = [&](const Vector& x) {
            ++evals;
            const double f = sphere.value(x);
            best = std::min(best, f);
            return f;
        };
        while (evals + lambda <= budget_max) {
            const Population offspring = cmaes_sample(state, bounds, rng, eval);
            cmaes_update(state, offspring);
            const Eigen::SelfAdjointEigenSolver<Matrix> solver(state.cov);
            if (solver.eigenvalues().minCoeff() <= 0.0) {
                detail = "covariance lost positive definiteness";
                return false;
            }
        }
        if (best <= 1e-8)
            ++hits;
    }
    std::ostringstream out;
    out << hits << "/30 trials reached 1e-8 (need >= 27); covariance PD every generation";
    detail = out.str();
    return hits >= 27;
}

// --- criterion 9: BOA baseline ----------------------------------------------

bool criterion_boa(std::string& detail) {
    const ObjectiveFn quadratic = [](const Vector& x) {
        return (x[0] - 0.3) * (x[0] - 0.3);
    };
    const Bounds bounds = uniform_bounds(1, 0.0, 1.0);
    int hits = 0;
    for (int seed = 0; seed < kTrials; ++seed) {
        const BoaResult result = run_boa(quadratic, bounds, 5, 20,
                                         AcquisitionSpec::expected_improvement(),
                                         static_cast<std::uint64_t>(seed));
        for (std::size_t i = 1; i < result.incumbent_history.size(); ++i) {
            if (result.incumbent_history[i] > result.incumbent_history[i - 1]) {
                detail = "incumbent sequence not monotone";
                return false;
            }
        }
        if (result.best_value <= 1e-2)
            ++hits;
    }
    std::ostringstream out;
    out << hits << "/30 seeds reached 1e-2 (need >= 28); incumbents monotone";
    detail = out.str();
    return hits >= 28;
}

// --- criterion 10: never significantly worse on the 2-D suite ---------------

bool criterion_never_worse(std::string& detail) {
    const auto& grid = full_grid();
    std::vector<std::string> offenders;
    for (const auto& [key, cell] : grid) {
        if (cell.verdict.direction == Direction::BaselineBetter &&
            cell.verdict.p_two_sided < 0.01)
            offenders.push_back(cell_text(key, cell));
    }
    if (!offenders.empty()) {
        std::ostringstream out;
        out << offenders.size() << " cell(s) favor the baseline at p<0.01:";
        for (const auto& text : offenders)
            out << " " << text;
        detail = out.str();
        return false;
    }
    int better = 0;
    for (const auto& [key, cell] : grid)
        if (cell.verdict.symbol != Significance::Equivalent)
            ++better;
    std::ostringstream out;
    out << grid.size() << " cells (10 problems x 3 backends, 30 trials): none baseline-better "
        << "at p<0.01; " << better << " hybrid-better";
    detail = out.str();
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        bool (*run)(std::string&);
    };
    const std::vector<Criterion> criteria{
        {1, "unimodal acceleration (sphere/elliptic 2-D, hDE vs DE, hCMA-ES vs CMA-ES)",
         criterion_unimodal_acceleration},
        {2, "ablation identity (hybrid off == plain backend, byte-identical CSVs)",
         criterion_ablation_identity},
        {3, "budget exactness (history length == evaluation count == 1000 x D)",
         criterion_budget_exactness},
        {4, "EI closed form vs Monte-Carlo improvement expectation", criterion_ei_monte_carlo},
        {5, "GPR noise-free interpolation on 50 random datasets", criterion_gpr_interpolation},
        {6, "Mann-Whitney normal approximation vs exact enumeration", criterion_mann_whitney},
        {7, "epsilon-greedy exploratory branch frequency", criterion_epsilon_frequency},
        {8, "CMA-ES sanity (2-D sphere to 1e-8, covariance PD)", criterion_cmaes_sanity},
        {9, "BOA baseline (1-D quadratic with EI)", criterion_boa},
        {10, "hybrid never significantly worse across the 2-D suite", criterion_never_worse},
    };

    int passed = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %2d: %s — %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name, detail.c_str(), seconds);
        std::fflush(stdout);
        if (ok)
            ++passed;
    }
    std::printf("ACCEPTANCE: %d/%zu criteria passed\n", passed, criteria.size());
    return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
