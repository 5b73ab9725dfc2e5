#include "elite_surge/hybrid.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace elite_surge {

const char* backend_name(BackendKind kind) {
    switch (kind) {
        case BackendKind::GA: return "ga";
        case BackendKind::DE: return "de";
        case BackendKind::CMAES: return "cmaes";
    }
    throw std::logic_error("unknown backend");
}

BackendState::BackendState(const HybridConfig& config, const Bounds& bounds, int population_size)
    : kind_(config.backend),
      ga_(config.ga),
      de_(config.de),
      cmaes_sigma0_(config.cmaes_sigma0),
      bounds_(bounds),
      pop_size_(population_size) {
    if (pop_size_ < 4)
        throw std::invalid_argument("population size must be at least 4");
}

Population BackendState::initialize(Rng& rng, const ObjectiveFn& eval) {
    if (kind_ == BackendKind::CMAES) {
        cma_ = cmaes_init(bounds_, pop_size_, cmaes_sigma0_, rng);
        return Population{};
    }
    return random_population(pop_size_, bounds_, rng, eval);
}

Population BackendState::propose(const Population& parents, Rng& rng, const ObjectiveFn& eval) {
    switch (kind_) {
        case BackendKind::GA: return ga_step(parents, ga_, bounds_, rng, eval);
        case BackendKind::DE: return de_step(parents, de_, bounds_, rng, eval);
        case BackendKind::CMAES: return cmaes_sample(*cma_, bounds_, rng, eval);
    }
    throw std::logic_error("unknown backend");
}

void BackendState::commit(const Population& offspring) {
    if (kind_ == BackendKind::CMAES)
        cmaes_update(*cma_, offspring);
}

GenerationOutcome hybrid_generation(Population& pop, BackendState& state,
                                    const HybridConfig& config, EvaluationBudget& budget,
                                    const ObjectiveFn& counted_eval,
                                    const ObjectiveFn& uncounted_eval, Rng& backend_rng,
                                    Rng& elite_rng,
                                    const std::vector<std::pair<Vector, double>>* archive) {
    GenerationOutcome outcome;
    const std::int64_t elite_cost = config.elite_counts_in_budget ? 1 : 0;
    const bool elite_step =
        config.hybrid_enabled && budget.remaining() >= state.population_size() + elite_cost;

    Population offspring = state.propose(pop, backend_rng, counted_eval);

    if (elite_step) {
        std::vector<std::pair<Vector, double>> train;
        if (config.surrogate_data == HybridConfig::SurrogateData::CumulativeArchive &&
            archive != nullptr) {
            train = *archive;
        } else {
            train.reserve(offspring.members.size());
            for (const auto& ind : offspring.members)
                train.emplace_back(ind.x, ind.fitness);
        }
        // Normalize the surrogate by the training data's own bounding box so
        // the length-scale grid keeps resolving the population as it
        // contracts.
        Bounds train_box;
        train_box.lo = train.front().first;
        train_box.hi = train.front().first;
        for (const auto& [x, y] : train) {
            train_box.lo = train_box.lo.cwiseMin(x);
            train_box.hi = train_box.hi.cwiseMax(x);
        }
        try {
            const GprModel model = GprModel::fit(train, train_box);
            outcome.surrogate_fitted = true;
            outcome.surrogate_training_size = static_cast<int>(train.size());

            const int pool_size = config.pool_size > 0
                                      ? config.pool_size
                                      : CandidatePool::default_size(state.bounds().dimension());
            CandidatePool pool = CandidatePool::uniform(state.bounds(), pool_size, elite_rng);
            for (const auto& ind : offspring.members)
                pool.append(ind.x);

            AcquisitionSpec spec = config.acquisition;
            spec.incumbent = std::min_element(train.begin(), train.end(),
                                              [](const auto& a, const auto& b) {
                                                  return a.second < b.second;
                                              })
                                 ->second;

            EliteChoice choice;
            if (spec.kind == AcquisitionKind::EpsilonGreedy) {
                choice = epsilon_greedy_select(model, pool, spec, elite_rng);
            } else {
                choice.x = argmax_pool(model, pool, spec, budget.used());
            }
            outcome.elite_attempted = true;
            outcome.elite_explored = choice.explored;

            const double elite_fitness =
                config.elite_counts_in_budget ? counted_eval(choice.x) : uncounted_eval(choice.x);
            const int worst = worst_index(offspring);
            if (elite_fitness < offspring.members[static_cast<std::size_t>(worst)].fitness) {
                offspring.members[static_cast<std::size_t>(worst)] =
                    Individual{choice.x, elite_fitness, true};
                outcome.elite_accepted = true;
            }
        } catch (const SingularKernel&) {
            // surrogate unusable this generation; offspring pass through
        }
    }

    state.commit(offspring);
    pop = std::move(offspring);
    return outcome;
}

TrialRecord run_trial(const BenchmarkProblem& problem, const HybridConfig& config,
                      std::uint64_t seed, std::int64_t max_evaluations,
                      const RunOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const int d = problem.dimension();
    const int pop_size = config.population_size > 0 ? config.population_size : 50 * d;
    const std::int64_t budget_max =
        max_evaluations > 0 ? max_evaluations : 1000 * static_cast<std::int64_t>(d);

    TrialRecord record;
    record.problem_id = problem.id();
    record.backend = config.backend;
    record.hybrid = config.hybrid_enabled;
    record.dimension = d;
    record.seed = seed;
    record.history.reserve(static_cast<std::size_t>(budget_max));

    EvaluationBudget budget(budget_max);
    Rng backend_rng(derive_seed(seed, 1));
    Rng elite_rng(derive_seed(seed, 2));

    const bool keep_archive =
        config.surrogate_data == HybridConfig::SurrogateData::CumulativeArchive;
    std::vector<std::pair<Vector, double>> archive;

    const auto note = [&](const Vector& x, double f) {
        if (f < record.best_value) {
            record.best_value = f;
            record.best_x = x;
        }
        if (keep_archive)
            archive.emplace_back(x, f);
        if (options.evaluation_observer)
            options.evaluation_observer(x, f);
    };
    const ObjectiveFn counted = [&](const Vector& x) {
        const double f = evaluate(problem, x, budget);
        note(x, f);
        record.history.push_back(record.best_value);
        return f;
    };
    const ObjectiveFn uncounted = [&](const Vector& x) {
        const double f = problem.value(x);
        record.uncounted_elite_evaluations += 1;
        note(x, f);
        return f;
    };

    BackendState state(config, problem.bounds(), pop_size);
    try {
        Population pop = state.initialize(backend_rng, counted);
        while (budget.remaining() > 0) {
            const GenerationOutcome outcome =
                hybrid_generation(pop, state, config, budget, counted, uncounted, backend_rng,
                                  elite_rng, keep_archive ? &archive : nullptr);
            record.generations += 1;
            record.elite_attempted += outcome.elite_attempted ? 1 : 0;
            record.elite_accepted += outcome.elite_accepted ? 1 : 0;
            record.elite_explored += outcome.elite_explored ? 1 : 0;
        }
    } catch (const BudgetExhausted&) {
        // budget spent mid-generation; the trial is complete
    }

    record.evaluations = budget.used();
    record.final_error = record.best_value - problem.optimum_value();
    record.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return record;
}

Matrix latin_hypercube(const Bounds& bounds, int n, Rng& rng) {
    const int d = bounds.dimension();
    Matrix points(n, d);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i)
            perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[static_cast<std::size_t>(rng.below(i + 1))]);
        for (int i = 0; i < n; ++i) {
            const double u = (static_cast<double>(perm[static_cast<std::size_t>(i)]) +
                              rng.uniform()) /
                             static_cast<double>(n);
            points(i, j) = bounds.lo[j] + u * bounds.span(j);
        }
    }
    return points;
}

BoaResult run_boa(const ObjectiveFn& objective, const Bounds& bounds, int n_init, int max_iter,
                  const AcquisitionSpec& acquisition, std::uint64_t seed) {
    if (n_init < 2)
        throw std::invalid_argument("run_boa needs n_init >= 2");
    Rng rng(seed);
    const int d = bounds.dimension();

    BoaResult result;
    std::vector<std::pair<Vector, double>> observations;
    observations.reserve(static_cast<std::size_t>(n_init + max_iter));

    const auto observe = [&](const Vector& x) {
        const double f = objective(x);
        observations.emplace_back(x, f);
        if (f < result.best_value) {
            result.best_value = f;
            result.best_x = x;
        }
        result.incumbent_history.push_back(result.best_value);
        result.evaluations += 1;
    };

    const Matrix design = latin_hypercube(bounds, n_init, rng);
    for (int i = 0; i < n_init; ++i)
        observe(design.row(i).transpose());

    for (int iter = 0; iter < max_iter; ++iter) {
        Vector next(d);
        AcquisitionSpec spec = acquisition;
        spec.incumbent = result.best_value;
        try {
            const GprModel model = GprModel::fit(observations, bounds);
            CandidatePool pool =
                CandidatePool::uniform(bounds, CandidatePool::default_size(d), rng);
            if (spec.kind == AcquisitionKind::EpsilonGreedy)
                next = epsilon_greedy_select(model, pool, spec, rng).x;
            else
                next = argmax_pool(model, pool, spec, result.evaluations);
        } catch (const SingularKernel&) {
            for (int j = 0; j < d; ++j)
                next[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
        }
        observe(next);
    }
    return result;
}

}  // namespace elite_surge
