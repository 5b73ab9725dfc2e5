#pragma once

#include "elite_surge/common.hpp"
#include "elite_surge/gpr.hpp"
#include "elite_surge/rng.hpp"

#include <cstdint>
#include <functional>
#include <limits>

namespace elite_surge {

enum class AcquisitionKind {
    ProbabilityOfImprovement,
    ExpectedImprovement,
    UpperConfidenceBound,
    EpsilonGreedy,
};

/// Tagged acquisition choice. All scores are in minimization sense: an
/// improvement means the predicted mean falls below the incumbent, and the
/// confidence-bound rule becomes a lower bound ranked by smallest value.
struct AcquisitionSpec {
    AcquisitionKind kind = AcquisitionKind::EpsilonGreedy;
    double xi = 0.0;       // ProbabilityOfImprovement only
    double epsilon = 0.1;  // EpsilonGreedy only
    std::function<double(std::int64_t)> beta_schedule;  // UpperConfidenceBound only
    double incumbent = std::numeric_limits<double>::quiet_NaN();

    double beta(std::int64_t evaluation_count) const {
        if (beta_schedule)
            return beta_schedule(evaluation_count);
        return 2.0 * std::log(static_cast<double>(evaluation_count) + 1.0);
    }

    static AcquisitionSpec probability_of_improvement(double xi = 0.0);
    static AcquisitionSpec expected_improvement();
    static AcquisitionSpec upper_confidence_bound(std::function<double(std::int64_t)> schedule = {});
    static AcquisitionSpec epsilon_greedy(double epsilon = 0.1);
};

/// Throws std::invalid_argument when a parameter is outside its range.
void validate(const AcquisitionSpec& spec);

/// In-bounds locations the pool-based argmax ranges over.
struct CandidatePool {
    Matrix points;  // m x D
    Bounds bounds;

    int size() const { return static_cast<int>(points.rows()); }

    static int default_size(int dimension) { return std::max(1000, 100 * dimension); }

    static CandidatePool uniform(const Bounds& bounds, int size, Rng& rng);

    void append(const Vector& x);
};

// Scalar forms (minimization sense), exposed for direct use and testing.
double pi_score(double mu, double sigma, double incumbent, double xi);
double ei_score(double mu, double sigma, double incumbent);
double lcb_score(double mu, double sigma, double beta);

double pi(const GprModel& model, const Vector& x, const AcquisitionSpec& spec);
double ei(const GprModel& model, const Vector& x, const AcquisitionSpec& spec);
double ucb(const GprModel& model, const Vector& x, const AcquisitionSpec& spec,
           std::int64_t evaluation_count);

struct EliteChoice {
    Vector x;
    bool explored = false;  // true when the epsilon branch fired
};

/// With probability epsilon a uniform point in the full box, otherwise the
/// pool point with minimum predicted mean. Deterministic given rng state.
EliteChoice epsilon_greedy_select(const GprModel& model, const CandidatePool& pool,
                                  const AcquisitionSpec& spec, Rng& rng);

/// Scores every pool point under the spec and returns the best one
/// (max for PI/EI, min for the confidence bound and greedy mean); ties break
/// to the lowest pool index.
Vector argmax_pool(const GprModel& model, const CandidatePool& pool, const AcquisitionSpec& spec,
                   std::int64_t evaluation_count);

}  // namespace elite_surge
