#include "elite_surge/gpr.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace elite_surge {

namespace {

constexpr double kBaseJitter = 1e-10;
constexpr double kMaxJitter = 1e-4;
constexpr double kConstantTargetSd = 1e-12;

Matrix squared_distances(const Matrix& x) {
    const auto n = x.rows();
    Matrix d2(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        d2(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = (x.row(i) - x.row(j)).squaredNorm();
            d2(i, j) = v;
            d2(j, i) = v;
        }
    }
    return d2;
}

struct CellFit {
    Matrix chol;
    Vector alpha;
    double jitter = kBaseJitter;
    double log_marginal_likelihood = -std::numeric_limits<double>::infinity();
    bool ok = false;
};

// Cholesky with jitter escalated x10 from 1e-10 up to 1e-4.
CellFit fit_cell(const Matrix& kernel, const Vector& y) {
    CellFit cell;
    const auto n = kernel.rows();
    for (double jitter = kBaseJitter; jitter <= kMaxJitter * 1.0000001; jitter *= 10.0) {
        Matrix k = kernel;
        k.diagonal().array() += jitter;
        const Eigen::LLT<Matrix> llt(k);
        if (llt.info() != Eigen::Success)
            continue;
        cell.chol = llt.matrixL();
        cell.alpha = llt.solve(y);
        cell.jitter = jitter;
        double log_det_half = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            log_det_half += std::log(cell.chol(i, i));
        cell.log_marginal_likelihood = -0.5 * y.dot(cell.alpha) - log_det_half -
                                       0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
        cell.ok = true;
        return cell;
    }
    return cell;
}

}  // namespace

Vector GprModel::normalize(const Vector& x) const {
    Vector z(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double span = x_hi_[i] - x_lo_[i];
        z[i] = span > 0.0 ? (x[i] - x_lo_[i]) / span : 0.0;
    }
    return z;
}

GprModel GprModel::fit_with_params(const std::vector<std::pair<Vector, double>>& points,
                                   const Bounds& bounds, double signal_variance,
                                   double length_scale) {
    GprModel model;
    if (model.init_training(points, bounds))
        return model;

    const Matrix d2 = squared_distances(model.x_train_);
    const Matrix kernel =
        signal_variance * (-d2 / (2.0 * length_scale * length_scale)).array().exp().matrix();
    const CellFit cell = fit_cell(kernel, model.y_train_);
    if (!cell.ok)
        throw SingularKernel("kernel matrix not positive definite at jitter 1e-4");

    model.params_.signal_variance = signal_variance;
    model.params_.length_scale = length_scale;
    model.params_.jitter = cell.jitter;
    model.chol_ = cell.chol;
    model.alpha_ = cell.alpha;
    model.log_marginal_likelihood_ = cell.log_marginal_likelihood;
    return model;
}

GprModel GprModel::fit(const std::vector<std::pair<Vector, double>>& points,
                       const Bounds& bounds) {
    GprModel model;
    if (model.init_training(points, bounds))
        return model;

    const Matrix d2 = squared_distances(model.x_train_);

    constexpr int kLengthScaleCount = 13;
    constexpr double kSignalVariances[] = {0.5, 1.0, 2.0};
    bool any_ok = false;
    double best_lml = -std::numeric_limits<double>::infinity();
    for (int li = 0; li < kLengthScaleCount; ++li) {
        const double ell =
            std::pow(10.0, -2.0 + 3.0 * static_cast<double>(li) / (kLengthScaleCount - 1));
        const Matrix e = (-d2 / (2.0 * ell * ell)).array().exp().matrix();
        for (const double sf2 : kSignalVariances) {
            const CellFit cell = fit_cell(sf2 * e, model.y_train_);
            if (!cell.ok)
                continue;
            any_ok = true;
            if (cell.log_marginal_likelihood > best_lml) {
                best_lml = cell.log_marginal_likelihood;
                model.params_.signal_variance = sf2;
                model.params_.length_scale = ell;
                model.params_.jitter = cell.jitter;
                model.chol_ = cell.chol;
                model.alpha_ = cell.alpha;
                model.log_marginal_likelihood_ = cell.log_marginal_likelihood;
            }
        }
    }
    if (!any_ok)
        throw SingularKernel("no hyperparameter grid cell admits a Cholesky factorization");
    return model;
}

GprModel::Prediction GprModel::predict(const Vector& x) const {
    Prediction out;
    if (degenerate_) {
        out.mu = y_mean_;
        out.sigma = 0.0;
        return out;
    }
    const Vector z = normalize(x);
    const auto n = x_train_.rows();
    Vector k_star(n);
    const double inv = 1.0 / (2.0 * params_.length_scale * params_.length_scale);
    for (Eigen::Index i = 0; i < n; ++i)
        k_star[i] = params_.signal_variance *
                    std::exp(-(x_train_.row(i).transpose() - z).squaredNorm() * inv);

    out.mu = y_mean_ + y_sd_ * k_star.dot(alpha_);
    const Vector v = chol_.triangularView<Eigen::Lower>().solve(k_star);
    const double variance = std::max(0.0, params_.signal_variance - v.squaredNorm());
    out.sigma = y_sd_ * std::sqrt(variance);
    return out;
}

Vector GprModel::predict_means(const Matrix& points) const {
    const auto m = points.rows();
    if (degenerate_)
        return Vector::Constant(m, y_mean_);
    const Matrix k_star = cross_kernel(points);
    return (y_sd_ * (k_star.transpose() * alpha_)).array() + y_mean_;
}

std::pair<Vector, Vector> GprModel::predict_batch(const Matrix& points) const {
    const auto m = points.rows();
    if (degenerate_)
        return {Vector::Constant(m, y_mean_), Vector::Zero(m)};
    const Matrix k_star = cross_kernel(points);
    Vector means = (y_sd_ * (k_star.transpose() * alpha_)).array() + y_mean_;
    const Matrix v = chol_.triangularView<Eigen::Lower>().solve(k_star);
    Vector sigmas(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double variance = std::max(0.0, params_.signal_variance - v.col(j).squaredNorm());
        sigmas[j] = y_sd_ * std::sqrt(variance);
    }
    return {std::move(means), std::move(sigmas)};
}

Matrix GprModel::cross_kernel(const Matrix& points) const {
    const auto m = points.rows();
    const auto n = x_train_.rows();
    Matrix k_star(n, m);
    const double inv = 1.0 / (2.0 * params_.length_scale * params_.length_scale);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Vector z = normalize(points.row(j).transpose());
        for (Eigen::Index i = 0; i < n; ++i)
            k_star(i, j) = params_.signal_variance *
                           std::exp(-(x_train_.row(i).transpose() - z).squaredNorm() * inv);
    }
    return k_star;
}

bool GprModel::init_training(const std::vector<std::pair<Vector, double>>& points,
                             const Bounds& bounds) {
    if (points.size() < 2)
        throw std::invalid_argument("GPR fit needs at least 2 points");
    x_lo_ = bounds.lo;
    x_hi_ = bounds.hi;

    const auto n = static_cast<Eigen::Index>(points.size());
    const auto d = static_cast<Eigen::Index>(points.front().first.size());
    x_train_.resize(n, d);
    Vector y_raw(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        x_train_.row(i) = normalize(points[static_cast<std::size_t>(i)].first);
        y_raw[i] = points[static_cast<std::size_t>(i)].second;
        if (!std::isfinite(y_raw[i]))
            throw std::invalid_argument("GPR fit requires finite targets");
    }

    y_mean_ = y_raw.mean();
    const double var = (y_raw.array() - y_mean_).square().sum() / static_cast<double>(n);
    y_sd_ = std::sqrt(var);
    if (y_sd_ < kConstantTargetSd) {
        degenerate_ = true;
        y_sd_ = 0.0;
        return true;
    }
    y_train_ = (y_raw.array() - y_mean_) / y_sd_;
    return false;
}

}  // namespace elite_surge
