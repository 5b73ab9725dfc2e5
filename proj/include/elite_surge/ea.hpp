#pragma once

#include "elite_surge/common.hpp"
#include "elite_surge/rng.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace elite_surge {

using ObjectiveFn = std::function<double(const Vector&)>;

struct Individual {
    Vector x;
    double fitness = 0.0;
    bool evaluated = false;
};

struct Population {
    std::vector<Individual> members;
    int generation = 0;

    int size() const { return static_cast<int>(members.size()); }
    bool fully_evaluated() const;
    int best_index() const;  // minimum fitness, ties to lowest index
};

/// Index of the maximum fitness (the worst member under minimization);
/// ties break to the lowest index.
int worst_index(const Population& pop);

/// Uniform random population, evaluated in member order.
Population random_population(int size, const Bounds& bounds, Rng& rng, const ObjectiveFn& eval);

/// Real-coded GA: tournament selection, SBX crossover, polynomial mutation,
/// single elitism (best parent survives, replacing the worst offspring).
struct GaParams {
    double crossover_rate = 0.5;  // Cr
    double mutation_rate = 0.1;   // M, per gene
    double sbx_eta = 15.0;
    double pm_eta = 20.0;
    int tournament_size = 2;
};

Population ga_step(const Population& pop, const GaParams& params, const Bounds& bounds, Rng& rng,
                   const ObjectiveFn& eval);

/// DE/rand/1/bin with greedy selection.
struct DeParams {
    double scale_f = 0.7;     // F
    double crossover_cr = 0.9;  // Cr
};

Population de_step(const Population& pop, const DeParams& params, const Bounds& bounds, Rng& rng,
                   const ObjectiveFn& eval);

/// Standard (mu/mu_w, lambda) CMA-ES state. Covariance kept symmetric
/// positive definite by flooring eigenvalues at 1e-14 on every update.
struct CmaesState {
    Vector mean;
    double sigma = 1.3;
    Matrix cov;
    Vector path_sigma;
    Vector path_cov;
    int lambda = 0;
    int generation = 0;

    // recombination weights and learning rates, fixed at init
    Vector weights;
    int mu = 0;
    double mu_eff = 0.0;
    double c_sigma = 0.0;
    double d_sigma = 0.0;
    double c_cov_path = 0.0;
    double c_rank_one = 0.0;
    double c_rank_mu = 0.0;
    double chi_n = 0.0;

    // sampling cache: cov = basis * diag(eigenvalues) * basis^T
    Matrix basis;
    Vector eigenvalues;

    void refresh_decomposition();  // symmetrize, floor eigenvalues, recache
};

CmaesState cmaes_init(const Bounds& bounds, int lambda, double sigma0, Rng& rng);

/// Samples lambda points from N(mean, sigma^2 C), clipped to bounds and
/// evaluated in draw order.
Population cmaes_sample(const CmaesState& state, const Bounds& bounds, Rng& rng,
                        const ObjectiveFn& eval);

/// Ranks the offspring by fitness and applies the standard mean, path,
/// covariance, and step-size updates.
void cmaes_update(CmaesState& state, const Population& offspring);

std::pair<Population, CmaesState> cmaes_step(const CmaesState& state, const Bounds& bounds,
                                             Rng& rng, const ObjectiveFn& eval);

}  // namespace elite_surge
