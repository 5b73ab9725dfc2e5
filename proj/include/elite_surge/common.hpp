#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace elite_surge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfBounds : std::runtime_error {
    explicit OutOfBounds(const std::string& what) : std::runtime_error(what) {}
};

struct SingularKernel : std::runtime_error {
    explicit SingularKernel(const std::string& what) : std::runtime_error(what) {}
};

/// Axis-aligned box domain.
struct Bounds {
    Vector lo;
    Vector hi;

    int dimension() const { return static_cast<int>(lo.size()); }

    bool contains(const Vector& x, double tol = 0.0) const {
        if (x.size() != lo.size())
            return false;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            // written so NaN coordinates count as outside
            if (!(x[i] >= lo[i] - tol) || !(x[i] <= hi[i] + tol))
                return false;
        }
        return true;
    }

    Vector clip(const Vector& x) const { return x.cwiseMax(lo).cwiseMin(hi); }

    double span(int i) const { return hi[i] - lo[i]; }
};

inline Bounds uniform_bounds(int dimension, double lo, double hi) {
    Bounds b;
    b.lo = Vector::Constant(dimension, lo);
    b.hi = Vector::Constant(dimension, hi);
    return b;
}

}  // namespace elite_surge
