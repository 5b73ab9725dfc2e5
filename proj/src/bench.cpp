#include "elite_surge/bench.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <utility>

namespace elite_surge {

namespace {

constexpr double kBoundsTolerance = 1e-9;

double sphere(const Vector& z) {
    return z.squaredNorm();
}

double elliptic(const Vector& z) {
    const auto d = z.size();
    if (d == 1)
        return z[0] * z[0];
    double sum = 0.0;
    for (Eigen::Index i = 0; i < d; ++i)
        sum += std::pow(1e6, static_cast<double>(i) / static_cast<double>(d - 1)) * z[i] * z[i];
    return sum;
}

double bent_cigar(const Vector& z) {
    double sum = z[0] * z[0];
    for (Eigen::Index i = 1; i < z.size(); ++i)
        sum += 1e6 * z[i] * z[i];
    return sum;
}

double rastrigin(const Vector& z) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        sum += z[i] * z[i] - 10.0 * std::cos(2.0 * M_PI * z[i]) + 10.0;
    return sum;
}

double ackley(const Vector& z) {
    // Input scaled so the classic [-32, 32] landscape spans the suite box.
    const double d = static_cast<double>(z.size());
    double sq = 0.0, cs = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        const double zi = 0.32 * z[i];
        sq += zi * zi;
        cs += std::cos(2.0 * M_PI * zi);
    }
    return -20.0 * std::exp(-0.2 * std::sqrt(sq / d)) - std::exp(cs / d) + 20.0 + std::exp(1.0);
}

double griewank(const Vector& z) {
    double sum = 0.0, prod = 1.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        sum += z[i] * z[i] / 4000.0;
        prod *= std::cos(z[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
}

double rosenbrock(const Vector& z) {
    // CEC-style 2.048/100 input scale, shifted so the minimum sits at z = 0.
    if (z.size() == 1) {
        const double y = 0.02048 * z[0] + 1.0;
        return (y - 1.0) * (y - 1.0);
    }
    double sum = 0.0;
    double y0 = 0.02048 * z[0] + 1.0;
    for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
        const double y1 = 0.02048 * z[i + 1] + 1.0;
        const double a = y0 * y0 - y1;
        sum += 100.0 * a * a + (y0 - 1.0) * (y0 - 1.0);
        y0 = y1;
    }
    return sum;
}

// Modified schwefel with out-of-range penalty branches; strictly maximal at
// w = 420.9687462275036, so the composed function has its unique minimum at
// z = 0.
double schwefel_g(double w, double d) {
    if (w > 500.0) {
        const double m = 500.0 - std::fmod(w, 500.0);
        return m * std::sin(std::sqrt(std::fabs(m))) - (w - 500.0) * (w - 500.0) / (10000.0 * d);
    }
    if (w < -500.0) {
        const double m = std::fmod(std::fabs(w), 500.0) - 500.0;
        return m * std::sin(std::sqrt(std::fabs(m))) - (w + 500.0) * (w + 500.0) / (10000.0 * d);
    }
    return w * std::sin(std::sqrt(std::fabs(w)));
}

constexpr double kSchwefelOptimum = 420.9687462275036;

double schwefel(const Vector& z) {
    const double d = static_cast<double>(z.size());
    const double peak = schwefel_g(kSchwefelOptimum, d);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        sum += peak - schwefel_g(10.0 * z[i] + kSchwefelOptimum, d);
    return sum;
}

}  // namespace

double base_function_value(BaseFunction base, const Vector& z) {
    switch (base) {
        case BaseFunction::Sphere: return sphere(z);
        case BaseFunction::Elliptic: return elliptic(z);
        case BaseFunction::BentCigar: return bent_cigar(z);
        case BaseFunction::Rastrigin: return rastrigin(z);
        case BaseFunction::Ackley: return ackley(z);
        case BaseFunction::Griewank: return griewank(z);
        case BaseFunction::Rosenbrock: return rosenbrock(z);
        case BaseFunction::Schwefel: return schwefel(z);
    }
    throw std::logic_error("unknown base function");
}

const char* family_name(ProblemFamily family) {
    switch (family) {
        case ProblemFamily::Unimodal: return "unimodal";
        case ProblemFamily::Multimodal: return "multimodal";
        case ProblemFamily::Composition: return "composition";
    }
    throw std::logic_error("unknown family");
}

EvaluationBudget::EvaluationBudget(std::int64_t max_evaluations) : max_(max_evaluations) {
    if (max_ <= 0)
        throw std::invalid_argument("max_evaluations must be positive");
}

void EvaluationBudget::consume() {
    if (used_ >= max_)
        throw BudgetExhausted();
    ++used_;
}

double composition_evaluate(const std::vector<CompositionComponent>& components, const Vector& x) {
    if (components.size() < 2)
        throw std::invalid_argument("composition needs at least 2 components");
    const double d = static_cast<double>(x.size());

    std::vector<double> raw(components.size());
    double total = 0.0;
    std::size_t nearest = 0;
    double nearest_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < components.size(); ++k) {
        const auto& c = components[k];
        if (c.shift.size() != x.size())
            throw DimensionMismatch("composition component dimension mismatch");
        const double d2 = (x - c.shift).squaredNorm();
        raw[k] = std::exp(-d2 / (2.0 * d * c.sigma_width * c.sigma_width));
        total += raw[k];
        if (d2 < nearest_d2) {
            nearest_d2 = d2;
            nearest = k;
        }
    }
    if (total == 0.0) {
        // Degenerate weights: every Gaussian underflowed.
        std::fill(raw.begin(), raw.end(), 0.0);
        raw[nearest] = 1.0;
        total = 1.0;
    }

    double value = 0.0;
    for (std::size_t k = 0; k < components.size(); ++k) {
        if (raw[k] == 0.0)
            continue;
        const auto& c = components[k];
        const double fk = base_function_value(c.base, c.rotation * (x - c.shift));
        value += (raw[k] / total) * (c.lambda_scale * fk + c.bias);
    }
    return value;
}

BenchmarkProblem::BenchmarkProblem(std::string id, ProblemFamily family, BaseFunction base,
                                   Bounds bounds, Vector shift, Matrix rotation, double bias)
    : id_(std::move(id)),
      family_(family),
      base_(base),
      bounds_(std::move(bounds)),
      shift_(std::move(shift)),
      rotation_(std::move(rotation)),
      bias_(bias),
      optimum_value_(bias) {
    if (shift_.size() != bounds_.dimension() || rotation_.rows() != bounds_.dimension() ||
        rotation_.cols() != bounds_.dimension())
        throw DimensionMismatch("problem fields disagree on dimension");
    if (!bounds_.contains(shift_))
        throw OutOfBounds("shift must lie inside bounds");
}

BenchmarkProblem::BenchmarkProblem(std::string id, Bounds bounds,
                                   std::vector<CompositionComponent> components, double bias)
    : id_(std::move(id)),
      family_(ProblemFamily::Composition),
      bounds_(std::move(bounds)),
      bias_(bias),
      optimum_value_(bias),
      components_(std::move(components)) {
    if (components_.size() < 2)
        throw std::invalid_argument("composition needs at least 2 components");
    shift_ = components_.front().shift;
    rotation_ = Matrix::Identity(bounds_.dimension(), bounds_.dimension());
    if (!bounds_.contains(shift_))
        throw OutOfBounds("component shift must lie inside bounds");
}

double BenchmarkProblem::value(const Vector& x) const {
    if (x.size() != dimension())
        throw DimensionMismatch(id_ + ": point has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(dimension()));
    if (!bounds_.contains(x, kBoundsTolerance))
        throw OutOfBounds(id_ + ": point outside bounds");
    if (family_ == ProblemFamily::Composition)
        return composition_evaluate(components_, x) + bias_;
    return base_function_value(base_, rotation_ * (x - shift_)) + bias_;
}

double evaluate(const BenchmarkProblem& problem, const Vector& x, EvaluationBudget& budget) {
    budget.consume();
    return problem.value(x);
}

Matrix random_rotation(int dimension, Rng& rng) {
    Matrix g(dimension, dimension);
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j)
            g(i, j) = rng.normal();
    const Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dimension; ++i)
        if (r(i, i) < 0.0)
            q.col(i) = -q.col(i);
    return q;
}

namespace {

Vector random_shift(int dimension, Rng& rng) {
    Vector s(dimension);
    for (int i = 0; i < dimension; ++i)
        s[i] = rng.uniform(-80.0, 80.0);
    return s;
}

BenchmarkProblem simple_problem(const std::string& id, ProblemFamily family, BaseFunction base,
                                double bias, int dimension, std::uint64_t seed,
                                std::uint64_t index) {
    Rng rng(derive_seed(seed, index));
    const Bounds bounds = uniform_bounds(dimension, -100.0, 100.0);
    Vector shift = random_shift(dimension, rng);
    Matrix rotation = random_rotation(dimension, rng);
    return BenchmarkProblem(id, family, base, bounds, std::move(shift), std::move(rotation), bias);
}

// Component shifts with guaranteed pairwise separation: opposite sign
// patterns scaled by a seeded magnitude in [65, 80] per coordinate. D = 1
// degenerates to {+, -, center}.
std::vector<Vector> component_shifts(int dimension, Rng& rng) {
    std::vector<Vector> shifts(3, Vector(dimension));
    if (dimension == 1) {
        shifts[0][0] = 65.0 + 15.0 * rng.uniform();
        shifts[1][0] = -(65.0 + 15.0 * rng.uniform());
        shifts[2][0] = 7.5 * (rng.uniform() - 0.5);
        return shifts;
    }
    for (int i = 0; i < dimension; ++i) {
        const double sign_c = (i % 2 == 0) ? 1.0 : -1.0;
        shifts[0][i] = 65.0 + 15.0 * rng.uniform();
        shifts[1][i] = -(65.0 + 15.0 * rng.uniform());
        shifts[2][i] = sign_c * (65.0 + 15.0 * rng.uniform());
    }
    return shifts;
}

BenchmarkProblem composition_problem(const std::string& id, double bias,
                                     const std::vector<BaseFunction>& bases,
                                     const std::vector<double>& lambdas, int dimension,
                                     std::uint64_t seed, std::uint64_t index) {
    Rng rng(derive_seed(seed, index));
    const Bounds bounds = uniform_bounds(dimension, -100.0, 100.0);
    const std::vector<Vector> shifts = component_shifts(dimension, rng);

    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < shifts.size(); ++a)
        for (std::size_t b = a + 1; b < shifts.size(); ++b)
            min_dist = std::min(min_dist, (shifts[a] - shifts[b]).norm());
    // Width tied to the component separation so that cross-component weight
    // leakage at each shift stays below 1e-10 of the total.
    const double sigma_base = min_dist / (10.0 * std::sqrt(static_cast<double>(dimension)));
    const double sigma_scales[3] = {0.6, 0.8, 1.0};
    const double component_biases[3] = {0.0, 100.0, 200.0};

    std::vector<CompositionComponent> components;
    components.reserve(3);
    for (int k = 0; k < 3; ++k) {
        CompositionComponent c;
        c.base = bases[static_cast<std::size_t>(k)];
        c.shift = shifts[static_cast<std::size_t>(k)];
        c.rotation = random_rotation(dimension, rng);
        c.sigma_width = sigma_base * sigma_scales[k];
        c.lambda_scale = lambdas[static_cast<std::size_t>(k)];
        c.bias = component_biases[k];
        components.push_back(std::move(c));
    }
    return BenchmarkProblem(id, bounds, std::move(components), bias);
}

}  // namespace

std::vector<BenchmarkProblem> make_suite(std::uint64_t seed, int dimension) {
    if (dimension < 1)
        throw std::invalid_argument("dimension must be >= 1");
    std::vector<BenchmarkProblem> suite;
    suite.reserve(10);
    suite.push_back(simple_problem("sphere", ProblemFamily::Unimodal, BaseFunction::Sphere,
                                   -1400.0, dimension, seed, 0));
    suite.push_back(simple_problem("elliptic", ProblemFamily::Unimodal, BaseFunction::Elliptic,
                                   -1300.0, dimension, seed, 1));
    suite.push_back(simple_problem("bent_cigar", ProblemFamily::Unimodal, BaseFunction::BentCigar,
                                   -1200.0, dimension, seed, 2));
    suite.push_back(simple_problem("rastrigin", ProblemFamily::Multimodal, BaseFunction::Rastrigin,
                                   -1100.0, dimension, seed, 3));
    suite.push_back(simple_problem("ackley", ProblemFamily::Multimodal, BaseFunction::Ackley,
                                   -1000.0, dimension, seed, 4));
    suite.push_back(simple_problem("griewank", ProblemFamily::Multimodal, BaseFunction::Griewank,
                                   -900.0, dimension, seed, 5));
    suite.push_back(simple_problem("rosenbrock", ProblemFamily::Multimodal,
                                   BaseFunction::Rosenbrock, -800.0, dimension, seed, 6));
    suite.push_back(simple_problem("schwefel", ProblemFamily::Multimodal, BaseFunction::Schwefel,
                                   -700.0, dimension, seed, 7));
    suite.push_back(composition_problem(
        "comp_a", 700.0, {BaseFunction::Rastrigin, BaseFunction::Griewank, BaseFunction::Sphere},
        {1.0, 10.0, 0.1}, dimension, seed, 8));
    suite.push_back(composition_problem(
        "comp_b", 800.0, {BaseFunction::Ackley, BaseFunction::Rosenbrock, BaseFunction::Elliptic},
        {20.0, 1.0, 1e-6}, dimension, seed, 9));
    return suite;
}

void write_suite_manifest(std::ostream& out, const std::vector<BenchmarkProblem>& suite,
                          std::uint64_t seed) {
    out << "elite-surge-suite v1\n";
    out << "id,family,dimension,bias,seed\n";
    for (const auto& problem : suite) {
        out << problem.id() << ',' << family_name(problem.family()) << ',' << problem.dimension()
            << ',' << problem.bias() << ',' << seed << '\n';
    }
}

std::vector<ManifestEntry> read_suite_manifest(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "elite-surge-suite v1")
        throw std::runtime_error("not an elite-surge suite manifest");
    if (!std::getline(in, line) || line != "id,family,dimension,bias,seed")
        throw std::runtime_error("manifest missing header row");
    std::vector<ManifestEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream row(line);
        ManifestEntry e;
        std::string field;
        std::getline(row, e.id, ',');
        std::getline(row, e.family, ',');
        std::getline(row, field, ',');
        e.dimension = std::stoi(field);
        std::getline(row, field, ',');
        e.bias = std::stod(field);
        std::getline(row, field, ',');
        e.seed = std::stoull(field);
        entries.push_back(std::move(e));
    }
    return entries;
}

}  // namespace elite_surge
