#pragma once

#include "elite_surge/acquisition.hpp"
#include "elite_surge/bench.hpp"
#include "elite_surge/common.hpp"
#include "elite_surge/ea.hpp"
#include "elite_surge/rng.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace elite_surge {

enum class BackendKind { GA, DE, CMAES };

const char* backend_name(BackendKind kind);

struct HybridConfig {
    enum class SurrogateData { CurrentGeneration, CumulativeArchive };

    BackendKind backend = BackendKind::DE;
    bool hybrid_enabled = true;
    AcquisitionSpec acquisition = AcquisitionSpec::epsilon_greedy(0.1);
    int population_size = 0;  // 0 -> 50 * D
    int pool_size = 0;        // 0 -> max(1000, 100 * D)
    SurrogateData surrogate_data = SurrogateData::CurrentGeneration;
    bool elite_counts_in_budget = true;

    GaParams ga;
    DeParams de;
    double cmaes_sigma0 = 1.3;
};

/// Offspring-generating backend behind one generation-step contract.
/// propose() performs the true evaluations for a generation; commit() absorbs
/// the (possibly elite-modified) offspring, which for CMA-ES runs the
/// distribution update so an injected elite influences mean, covariance and
/// step size.
class BackendState {
public:
    BackendState(const HybridConfig& config, const Bounds& bounds, int population_size);

    /// GA/DE: evaluated uniform population (population_size evaluations).
    /// CMA-ES: initializes the sampling distribution, returns an empty
    /// population without spending evaluations.
    Population initialize(Rng& rng, const ObjectiveFn& eval);

    Population propose(const Population& parents, Rng& rng, const ObjectiveFn& eval);

    void commit(const Population& offspring);

    int population_size() const { return pop_size_; }
    const Bounds& bounds() const { return bounds_; }
    BackendKind kind() const { return kind_; }
    const CmaesState* cmaes_state() const { return cma_ ? &*cma_ : nullptr; }

private:
    BackendKind kind_;
    GaParams ga_;
    DeParams de_;
    double cmaes_sigma0_;
    Bounds bounds_;
    int pop_size_;
    std::optional<CmaesState> cma_;
};

struct GenerationOutcome {
    bool surrogate_fitted = false;
    int surrogate_training_size = 0;
    bool elite_attempted = false;
    bool elite_explored = false;
    bool elite_accepted = false;
};

/// One generation of the hybrid loop: backend step, surrogate fit on the
/// offspring, elite nomination, true evaluation of the elite, and
/// replacement of the worst offspring when the elite is truly better. When
/// fewer than population_size + 1 evaluations remain, runs the plain backend
/// step with whatever remains and skips the elite step. On SingularKernel
/// the elite step is skipped for this generation.
///
/// The backend consumes only backend_rng and the elite path only elite_rng,
/// so disabling the hybrid reproduces the plain backend trajectory exactly.
GenerationOutcome hybrid_generation(
    Population& pop, BackendState& state, const HybridConfig& config, EvaluationBudget& budget,
    const ObjectiveFn& counted_eval, const ObjectiveFn& uncounted_eval, Rng& backend_rng,
    Rng& elite_rng, const std::vector<std::pair<Vector, double>>* archive = nullptr);

struct TrialRecord {
    std::string problem_id;
    BackendKind backend = BackendKind::DE;
    bool hybrid = false;
    int dimension = 0;
    std::uint64_t seed = 0;

    /// Best-so-far objective value after each counted evaluation.
    std::vector<double> history;
    double best_value = std::numeric_limits<double>::infinity();
    Vector best_x;
    double final_error = std::numeric_limits<double>::quiet_NaN();
    double wall_time_seconds = 0.0;
    std::int64_t evaluations = 0;
    std::int64_t generations = 0;
    std::int64_t elite_attempted = 0;
    std::int64_t elite_accepted = 0;
    std::int64_t elite_explored = 0;
    std::int64_t uncounted_elite_evaluations = 0;
};

struct RunOptions {
    /// Called after every true evaluation (counted or not); test hook.
    std::function<void(const Vector&, double)> evaluation_observer;
};

/// Full trial: loops hybrid (or plain backend) generations until the budget
/// is exhausted. max_evaluations = 0 selects the 1000 x D default.
TrialRecord run_trial(const BenchmarkProblem& problem, const HybridConfig& config,
                      std::uint64_t seed, std::int64_t max_evaluations = 0,
                      const RunOptions& options = {});

struct BoaResult {
    Vector best_x;
    double best_value = std::numeric_limits<double>::infinity();
    /// Incumbent after each evaluation (initial design included).
    std::vector<double> incumbent_history;
    std::int64_t evaluations = 0;
};

/// Standalone Bayesian optimization baseline: Latin hypercube design of
/// n_init points, then max_iter rounds of fit-on-everything, pool argmax of
/// the acquisition, evaluate, append. SingularKernel falls back to a uniform
/// random point for that iteration.
BoaResult run_boa(const ObjectiveFn& objective, const Bounds& bounds, int n_init, int max_iter,
                  const AcquisitionSpec& acquisition, std::uint64_t seed);

/// n stratified-uniform points, one stratum per point and dimension.
Matrix latin_hypercube(const Bounds& bounds, int n, Rng& rng);

}  // namespace elite_surge
