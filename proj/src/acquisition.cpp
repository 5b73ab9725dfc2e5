#include "elite_surge/acquisition.hpp"

#include "elite_surge/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace elite_surge {

AcquisitionSpec AcquisitionSpec::probability_of_improvement(double xi) {
    AcquisitionSpec spec;
    spec.kind = AcquisitionKind::ProbabilityOfImprovement;
    spec.xi = xi;
    return spec;
}

AcquisitionSpec AcquisitionSpec::expected_improvement() {
    AcquisitionSpec spec;
    spec.kind = AcquisitionKind::ExpectedImprovement;
    return spec;
}

AcquisitionSpec AcquisitionSpec::upper_confidence_bound(
    std::function<double(std::int64_t)> schedule) {
    AcquisitionSpec spec;
    spec.kind = AcquisitionKind::UpperConfidenceBound;
    spec.beta_schedule = std::move(schedule);
    return spec;
}

AcquisitionSpec AcquisitionSpec::epsilon_greedy(double epsilon) {
    AcquisitionSpec spec;
    spec.kind = AcquisitionKind::EpsilonGreedy;
    spec.epsilon = epsilon;
    return spec;
}

void validate(const AcquisitionSpec& spec) {
    switch (spec.kind) {
        case AcquisitionKind::ProbabilityOfImprovement:
            if (spec.xi < 0.0)
                throw std::invalid_argument("PI requires xi >= 0");
            break;
        case AcquisitionKind::ExpectedImprovement:
            break;
        case AcquisitionKind::UpperConfidenceBound:
            if (spec.beta(0) < 0.0 || spec.beta(1) < 0.0)
                throw std::invalid_argument("UCB requires beta_i >= 0");
            break;
        case AcquisitionKind::EpsilonGreedy:
            if (spec.epsilon < 0.0 || spec.epsilon > 1.0)
                throw std::invalid_argument("epsilon must lie in [0, 1]");
            break;
    }
}

CandidatePool CandidatePool::uniform(const Bounds& bounds, int size, Rng& rng) {
    if (size < 1)
        throw std::invalid_argument("pool size must be positive");
    CandidatePool pool;
    pool.bounds = bounds;
    const int d = bounds.dimension();
    pool.points.resize(size, d);
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < d; ++j)
            pool.points(i, j) = rng.uniform(bounds.lo[j], bounds.hi[j]);
    return pool;
}

void CandidatePool::append(const Vector& x) {
    points.conservativeResize(points.rows() + 1, Eigen::NoChange);
    points.row(points.rows() - 1) = x.transpose();
}

namespace {

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

}  // namespace

double pi_score(double mu, double sigma, double incumbent, double xi) {
    if (sigma <= 0.0)
        return mu < incumbent - xi ? 1.0 : 0.0;
    return normal_cdf((incumbent - mu - xi) / sigma);
}

double ei_score(double mu, double sigma, double incumbent) {
    if (sigma <= 0.0)
        return std::max(incumbent - mu, 0.0);
    const double s = (incumbent - mu) / sigma;
    return sigma * (s * normal_cdf(s) + normal_pdf(s));
}

double lcb_score(double mu, double sigma, double beta) {
    return mu - std::sqrt(beta) * sigma;
}

double pi(const GprModel& model, const Vector& x, const AcquisitionSpec& spec) {
    const auto p = model.predict(x);
    return pi_score(p.mu, p.sigma, spec.incumbent, spec.xi);
}

double ei(const GprModel& model, const Vector& x, const AcquisitionSpec& spec) {
    const auto p = model.predict(x);
    return ei_score(p.mu, p.sigma, spec.incumbent);
}

double ucb(const GprModel& model, const Vector& x, const AcquisitionSpec& spec,
           std::int64_t evaluation_count) {
    const auto p = model.predict(x);
    return lcb_score(p.mu, p.sigma, spec.beta(evaluation_count));
}

EliteChoice epsilon_greedy_select(const GprModel& model, const CandidatePool& pool,
                                  const AcquisitionSpec& spec, Rng& rng) {
    if (pool.size() < 1)
        throw std::invalid_argument("pool must be nonempty");
    EliteChoice choice;
    if (rng.uniform() < spec.epsilon) {
        choice.explored = true;
        const int d = pool.bounds.dimension();
        choice.x.resize(d);
        for (int j = 0; j < d; ++j)
            choice.x[j] = rng.uniform(pool.bounds.lo[j], pool.bounds.hi[j]);
        return choice;
    }
    const Vector means = model.predict_means(pool.points);
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < means.size(); ++i)
        if (means[i] < means[best])
            best = i;
    choice.x = pool.points.row(best).transpose();
    return choice;
}

Vector argmax_pool(const GprModel& model, const CandidatePool& pool, const AcquisitionSpec& spec,
                   std::int64_t evaluation_count) {
    if (pool.size() < 1)
        throw std::invalid_argument("pool must be nonempty");

    if (spec.kind == AcquisitionKind::EpsilonGreedy) {
        const Vector means = model.predict_means(pool.points);
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < means.size(); ++i)
            if (means[i] < means[best])
                best = i;
        return pool.points.row(best).transpose();
    }

    const auto [means, sigmas] = model.predict_batch(pool.points);
    const bool maximize = spec.kind != AcquisitionKind::UpperConfidenceBound;
    const auto score_at = [&](Eigen::Index i) {
        switch (spec.kind) {
            case AcquisitionKind::ProbabilityOfImprovement:
                return pi_score(means[i], sigmas[i], spec.incumbent, spec.xi);
            case AcquisitionKind::ExpectedImprovement:
                return ei_score(means[i], sigmas[i], spec.incumbent);
            case AcquisitionKind::UpperConfidenceBound:
                return lcb_score(means[i], sigmas[i], spec.beta(evaluation_count));
            case AcquisitionKind::EpsilonGreedy:
                break;  // handled above
        }
        throw std::logic_error("unreachable");
    };
    Eigen::Index best = 0;
    double best_score = score_at(0);
    for (Eigen::Index i = 1; i < means.size(); ++i) {
        const double score = score_at(i);
        if (maximize ? score > best_score : score < best_score) {
            best = i;
            best_score = score;
        }
    }
    return pool.points.row(best).transpose();
}

}  // namespace elite_surge
