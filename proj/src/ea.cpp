#include "elite_surge/ea.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace elite_surge {

bool Population::fully_evaluated() const {
    return std::all_of(members.begin(), members.end(),
                       [](const Individual& ind) { return ind.evaluated; });
}

int Population::best_index() const {
    if (members.empty())
        throw std::logic_error("empty population");
    int best = 0;
    for (int i = 1; i < size(); ++i)
        if (members[static_cast<std::size_t>(i)].fitness <
            members[static_cast<std::size_t>(best)].fitness)
            best = i;
    return best;
}

int worst_index(const Population& pop) {
    if (pop.members.empty())
        throw std::logic_error("empty population");
    int worst = 0;
    for (int i = 1; i < pop.size(); ++i)
        if (pop.members[static_cast<std::size_t>(i)].fitness >
            pop.members[static_cast<std::size_t>(worst)].fitness)
            worst = i;
    return worst;
}

Population random_population(int size, const Bounds& bounds, Rng& rng, const ObjectiveFn& eval) {
    Population pop;
    pop.members.resize(static_cast<std::size_t>(size));
    const int d = bounds.dimension();
    for (auto& ind : pop.members) {
        ind.x.resize(d);
        for (int j = 0; j < d; ++j)
            ind.x[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
    }
    for (auto& ind : pop.members) {
        ind.fitness = eval(ind.x);
        ind.evaluated = true;
    }
    return pop;
}

namespace {

int tournament(const Population& pop, int size, Rng& rng) {
    int best = static_cast<int>(rng.below(pop.size()));
    for (int k = 1; k < size; ++k) {
        const int challenger = static_cast<int>(rng.below(pop.size()));
        if (pop.members[static_cast<std::size_t>(challenger)].fitness <
            pop.members[static_cast<std::size_t>(best)].fitness)
            best = challenger;
    }
    return best;
}

void sbx_crossover(Vector& a, Vector& b, double eta, Rng& rng) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (rng.uniform() >= 0.5)
            continue;
        if (std::fabs(a[j] - b[j]) < 1e-14)
            continue;
        const double u = rng.uniform();
        double beta;
        if (u <= 0.5)
            beta = std::pow(2.0 * u, 1.0 / (eta + 1.0));
        else
            beta = std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
        const double c1 = 0.5 * ((1.0 + beta) * a[j] + (1.0 - beta) * b[j]);
        const double c2 = 0.5 * ((1.0 - beta) * a[j] + (1.0 + beta) * b[j]);
        a[j] = c1;
        b[j] = c2;
    }
}

void polynomial_mutation(Vector& x, double rate, double eta, const Bounds& bounds, Rng& rng) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (rng.uniform() >= rate)
            continue;
        const double u = rng.uniform();
        double delta;
        if (u < 0.5)
            delta = std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0;
        else
            delta = 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
        x[j] += delta * bounds.span(static_cast<int>(j));
    }
}

}  // namespace

Population ga_step(const Population& pop, const GaParams& params, const Bounds& bounds, Rng& rng,
                   const ObjectiveFn& eval) {
    if (!pop.fully_evaluated())
        throw std::logic_error("ga_step requires a fully evaluated population");
    const int n = pop.size();
    const int elite_parent = pop.best_index();

    Population next;
    next.generation = pop.generation + 1;
    next.members.reserve(static_cast<std::size_t>(n));
    while (next.size() < n) {
        const auto& p1 = pop.members[static_cast<std::size_t>(
            tournament(pop, params.tournament_size, rng))];
        const auto& p2 = pop.members[static_cast<std::size_t>(
            tournament(pop, params.tournament_size, rng))];
        Vector c1 = p1.x;
        Vector c2 = p2.x;
        if (rng.uniform() < params.crossover_rate)
            sbx_crossover(c1, c2, params.sbx_eta, rng);
        polynomial_mutation(c1, params.mutation_rate, params.pm_eta, bounds, rng);
        polynomial_mutation(c2, params.mutation_rate, params.pm_eta, bounds, rng);
        next.members.push_back({bounds.clip(c1), 0.0, false});
        if (next.size() < n)
            next.members.push_back({bounds.clip(c2), 0.0, false});
    }
    for (auto& ind : next.members) {
        ind.fitness = eval(ind.x);
        ind.evaluated = true;
    }
    // single elitism: best parent replaces the worst offspring
    next.members[static_cast<std::size_t>(worst_index(next))] =
        pop.members[static_cast<std::size_t>(elite_parent)];
    return next;
}

Population de_step(const Population& pop, const DeParams& params, const Bounds& bounds, Rng& rng,
                   const ObjectiveFn& eval) {
    const int n = pop.size();
    if (n < 4)
        throw std::logic_error("DE/rand/1 needs a population of at least 4");
    if (!pop.fully_evaluated())
        throw std::logic_error("de_step requires a fully evaluated population");
    const auto d = pop.members.front().x.size();

    Population next;
    next.generation = pop.generation + 1;
    next.members.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int r1 = i, r2 = i, r3 = i;
        while (r1 == i)
            r1 = static_cast<int>(rng.below(n));
        while (r2 == i || r2 == r1)
            r2 = static_cast<int>(rng.below(n));
        while (r3 == i || r3 == r1 || r3 == r2)
            r3 = static_cast<int>(rng.below(n));

        const Vector& x1 = pop.members[static_cast<std::size_t>(r1)].x;
        const Vector& x2 = pop.members[static_cast<std::size_t>(r2)].x;
        const Vector& x3 = pop.members[static_cast<std::size_t>(r3)].x;
        const Vector donor = x1 + params.scale_f * (x2 - x3);

        const auto j_rand = rng.below(d);
        Vector trial = pop.members[static_cast<std::size_t>(i)].x;
        for (Eigen::Index j = 0; j < d; ++j)
            if (j == j_rand || rng.uniform() < params.crossover_cr)
                trial[j] = donor[j];
        trial = bounds.clip(trial);

        const double trial_fitness = eval(trial);
        const auto& parent = pop.members[static_cast<std::size_t>(i)];
        if (trial_fitness <= parent.fitness)
            next.members[static_cast<std::size_t>(i)] = {std::move(trial), trial_fitness, true};
        else
            next.members[static_cast<std::size_t>(i)] = parent;
    }
    return next;
}

void CmaesState::refresh_decomposition() {
    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("CMA-ES covariance eigendecomposition failed");
    eigenvalues = solver.eigenvalues();
    basis = solver.eigenvectors();
    bool repaired = false;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] < 1e-14) {
            eigenvalues[i] = 1e-14;
            repaired = true;
        }
    }
    if (repaired)
        cov = basis * eigenvalues.asDiagonal() * basis.transpose();
}

CmaesState cmaes_init(const Bounds& bounds, int lambda, double sigma0, Rng& rng) {
    if (lambda < 4)
        throw std::invalid_argument("CMA-ES needs lambda >= 4");
    const int d = bounds.dimension();
    CmaesState s;
    s.lambda = lambda;
    s.sigma = sigma0;
    s.mean.resize(d);
    for (int j = 0; j < d; ++j)
        s.mean[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
    s.cov = Matrix::Identity(d, d);
    s.path_sigma = Vector::Zero(d);
    s.path_cov = Vector::Zero(d);

    s.mu = lambda / 2;
    s.weights.resize(s.mu);
    for (int i = 0; i < s.mu; ++i)
        s.weights[i] = std::log((static_cast<double>(lambda) + 1.0) / 2.0) -
                       std::log(static_cast<double>(i) + 1.0);
    s.weights /= s.weights.sum();
    s.mu_eff = 1.0 / s.weights.squaredNorm();

    const double dd = static_cast<double>(d);
    s.c_sigma = (s.mu_eff + 2.0) / (dd + s.mu_eff + 5.0);
    s.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((s.mu_eff - 1.0) / (dd + 1.0)) - 1.0) +
                s.c_sigma;
    s.c_cov_path = (4.0 + s.mu_eff / dd) / (dd + 4.0 + 2.0 * s.mu_eff / dd);
    s.c_rank_one = 2.0 / ((dd + 1.3) * (dd + 1.3) + s.mu_eff);
    s.c_rank_mu = std::min(1.0 - s.c_rank_one,
                           2.0 * (s.mu_eff - 2.0 + 1.0 / s.mu_eff) /
                               ((dd + 2.0) * (dd + 2.0) + s.mu_eff));
    s.chi_n = std::sqrt(dd) * (1.0 - 1.0 / (4.0 * dd) + 1.0 / (21.0 * dd * dd));

    s.refresh_decomposition();
    return s;
}

Population cmaes_sample(const CmaesState& state, const Bounds& bounds, Rng& rng,
                        const ObjectiveFn& eval) {
    const auto d = state.mean.size();
    Population pop;
    pop.generation = state.generation + 1;
    pop.members.resize(static_cast<std::size_t>(state.lambda));
    const Vector scale = state.eigenvalues.cwiseSqrt();
    for (auto& ind : pop.members) {
        Vector z(d);
        for (Eigen::Index j = 0; j < d; ++j)
            z[j] = rng.normal();
        ind.x = bounds.clip(state.mean + state.sigma * (state.basis * scale.cwiseProduct(z)));
    }
    for (auto& ind : pop.members) {
        ind.fitness = eval(ind.x);
        ind.evaluated = true;
    }
    return pop;
}

void cmaes_update(CmaesState& state, const Population& offspring) {
    if (offspring.size() != state.lambda)
        throw std::logic_error("offspring size does not match lambda");
    if (!offspring.fully_evaluated())
        throw std::logic_error("cmaes_update requires evaluated offspring");
    const auto d = state.mean.size();
    const double dd = static_cast<double>(d);

    std::vector<int> order(static_cast<std::size_t>(state.lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&offspring](int a, int b) {
        return offspring.members[static_cast<std::size_t>(a)].fitness <
               offspring.members[static_cast<std::size_t>(b)].fitness;
    });

    // steps of the selected offspring in sigma units
    Matrix steps(d, state.mu);
    for (int i = 0; i < state.mu; ++i)
        steps.col(i) =
            (offspring.members[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])].x -
             state.mean) /
            state.sigma;
    const Vector mean_step = steps * state.weights;

    state.mean += state.sigma * mean_step;

    const Vector inv_scale = state.eigenvalues.cwiseSqrt().cwiseInverse();
    const Vector whitened =
        state.basis * inv_scale.cwiseProduct(state.basis.transpose() * mean_step);
    state.path_sigma = (1.0 - state.c_sigma) * state.path_sigma +
                       std::sqrt(state.c_sigma * (2.0 - state.c_sigma) * state.mu_eff) * whitened;

    const double path_norm = state.path_sigma.norm();
    const double expected_decay =
        std::sqrt(1.0 - std::pow(1.0 - state.c_sigma, 2.0 * (state.generation + 1)));
    const bool h_sigma =
        path_norm / expected_decay < (1.4 + 2.0 / (dd + 1.0)) * state.chi_n;

    state.path_cov = (1.0 - state.c_cov_path) * state.path_cov;
    if (h_sigma)
        state.path_cov += std::sqrt(state.c_cov_path * (2.0 - state.c_cov_path) * state.mu_eff) *
                          mean_step;

    Matrix rank_mu = Matrix::Zero(d, d);
    for (int i = 0; i < state.mu; ++i)
        rank_mu += state.weights[i] * steps.col(i) * steps.col(i).transpose();

    const double h_correction =
        h_sigma ? 0.0 : state.c_cov_path * (2.0 - state.c_cov_path);
    state.cov = (1.0 - state.c_rank_one - state.c_rank_mu) * state.cov +
                state.c_rank_one *
                    (state.path_cov * state.path_cov.transpose() + h_correction * state.cov) +
                state.c_rank_mu * rank_mu;

    // exponent clamped so a blown-up whitened path cannot overflow sigma
    const double exponent = std::clamp(
        (state.c_sigma / state.d_sigma) * (path_norm / state.chi_n - 1.0), -1.0, 1.0);
    state.sigma *= std::exp(exponent);

    state.generation += 1;
    state.refresh_decomposition();
}

std::pair<Population, CmaesState> cmaes_step(const CmaesState& state, const Bounds& bounds,
                                             Rng& rng, const ObjectiveFn& eval) {
    CmaesState next = state;
    Population offspring = cmaes_sample(next, bounds, rng, eval);
    cmaes_update(next, offspring);
    return {std::move(offspring), std::move(next)};
}

}  // namespace elite_surge
