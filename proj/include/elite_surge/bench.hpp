#pragma once

#include "elite_surge/common.hpp"
#include "elite_surge/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace elite_surge {

enum class ProblemFamily { Unimodal, Multimodal, Composition };

const char* family_name(ProblemFamily family);

/// Base function families, each with minimum 0 at z = 0. Where the classic
/// form has its optimum elsewhere (rosenbrock, schwefel) the input is shifted
/// internally so the contract holds.
enum class BaseFunction {
    Sphere,
    Elliptic,
    BentCigar,
    Rastrigin,
    Ackley,
    Griewank,
    Rosenbrock,
    Schwefel,
};

double base_function_value(BaseFunction base, const Vector& z);

/// Per-trial counter of true objective evaluations. Single-owner; never
/// shared between concurrent trials.
class EvaluationBudget {
public:
    explicit EvaluationBudget(std::int64_t max_evaluations);

    std::int64_t max_evaluations() const { return max_; }
    std::int64_t used() const { return used_; }
    std::int64_t remaining() const { return max_ - used_; }

    /// Accounts for one true evaluation. Throws BudgetExhausted when spent.
    void consume();

private:
    std::int64_t max_;
    std::int64_t used_ = 0;
};

struct CompositionComponent {
    BaseFunction base;
    Vector shift;
    Matrix rotation;
    double sigma_width;   // controls the Gaussian proximity weight
    double lambda_scale;  // multiplies the component value
    double bias;          // added to the scaled component value
};

/// Proximity-weighted blend of shifted base functions:
///   sum_k w_k (lambda_k f_k(x) + bias_k),  w_k ~ exp(-|x-shift_k|^2 / (2 D sigma_k^2))
/// normalized to sum 1. If every raw weight underflows to zero the nearest
/// component takes weight 1.
double composition_evaluate(const std::vector<CompositionComponent>& components, const Vector& x);

/// Immutable objective definition: shifted, rotated base function plus bias,
/// or a composition of such components. Safe to share across threads.
class BenchmarkProblem {
public:
    BenchmarkProblem(std::string id, ProblemFamily family, BaseFunction base, Bounds bounds,
                     Vector shift, Matrix rotation, double bias);

    BenchmarkProblem(std::string id, Bounds bounds, std::vector<CompositionComponent> components,
                     double bias);

    const std::string& id() const { return id_; }
    int dimension() const { return bounds_.dimension(); }
    const Bounds& bounds() const { return bounds_; }
    ProblemFamily family() const { return family_; }
    double bias() const { return bias_; }

    /// Known optimizer location. For compositions this is the shift of the
    /// zero-bias leading component.
    const Vector& shift() const { return shift_; }
    const Matrix& rotation() const { return rotation_; }

    double optimum_value() const { return optimum_value_; }

    const std::vector<CompositionComponent>& components() const { return components_; }

    /// Raw objective value. Does not touch any budget; rejects points more
    /// than 1e-9 outside the bounds and dimension mismatches.
    double value(const Vector& x) const;

private:
    std::string id_;
    ProblemFamily family_;
    BaseFunction base_ = BaseFunction::Sphere;
    Bounds bounds_;
    Vector shift_;
    Matrix rotation_;
    double bias_ = 0.0;
    double optimum_value_ = 0.0;
    std::vector<CompositionComponent> components_;
};

/// True-fitness evaluation: consumes one budget unit and returns the
/// objective value at x.
double evaluate(const BenchmarkProblem& problem, const Vector& x, EvaluationBudget& budget);

/// Random orthogonal matrix (QR of a seeded Gaussian matrix, sign-fixed).
Matrix random_rotation(int dimension, Rng& rng);

/// Deterministic 10-problem suite for the given seed and dimension:
/// 3 unimodal, 5 multimodal, 2 composition problems on [-100, 100]^D.
std::vector<BenchmarkProblem> make_suite(std::uint64_t seed, int dimension);

struct ManifestEntry {
    std::string id;
    std::string family;
    int dimension = 0;
    double bias = 0.0;
    std::uint64_t seed = 0;
};

void write_suite_manifest(std::ostream& out, const std::vector<BenchmarkProblem>& suite,
                          std::uint64_t seed);
std::vector<ManifestEntry> read_suite_manifest(std::istream& in);

}  // namespace elite_surge
