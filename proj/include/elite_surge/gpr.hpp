#pragma once

#include "elite_surge/common.hpp"

#include <utility>
#include <vector>

namespace elite_surge {

struct KernelParams {
    double signal_variance = 1.0;  // sigma_f^2
    double length_scale = 1.0;     // ell, in unit-box coordinates
    double jitter = 1e-10;         // diagonal added to K (escalated when needed)
};

/// Noise-free Gaussian process regression with an isotropic squared
/// exponential kernel k(a,b) = sigma_f^2 exp(-|a-b|^2 / (2 ell^2)).
///
/// Inputs are normalized to the unit box and targets standardized before
/// fitting, so one length-scale grid serves problems with arbitrary bounds.
/// A fitted model is immutable and safe for concurrent predict calls.
class GprModel {
public:
    struct Prediction {
        double mu = 0.0;
        double sigma = 0.0;
    };

    /// Fits hyperparameters by grid-searched log marginal likelihood
    /// (13 log-spaced length scales in [1e-2, 1e1] x signal variances
    /// {0.5, 1, 2}). Throws SingularKernel when no grid cell admits a
    /// Cholesky factorization even with jitter escalated to 1e-4.
    /// Constant targets (sd < 1e-12) yield a degenerate model that predicts
    /// (mean, 0) everywhere.
    static GprModel fit(const std::vector<std::pair<Vector, double>>& points,
                        const Bounds& bounds);

    /// Single fit at fixed hyperparameters; same jitter escalation rule.
    static GprModel fit_with_params(const std::vector<std::pair<Vector, double>>& points,
                                    const Bounds& bounds, double signal_variance,
                                    double length_scale);

    Prediction predict(const Vector& x) const;

    /// Posterior means for many query points at once (rows of `points`).
    Vector predict_means(const Matrix& points) const;

    /// Means and standard deviations for many query points at once.
    std::pair<Vector, Vector> predict_batch(const Matrix& points) const;

    int training_size() const { return static_cast<int>(x_train_.rows()); }
    bool degenerate() const { return degenerate_; }
    const KernelParams& kernel_params() const { return params_; }
    double log_marginal_likelihood() const { return log_marginal_likelihood_; }
    double y_mean() const { return y_mean_; }
    double y_sd() const { return y_sd_; }

    /// Training inputs in unit-box coordinates (rows).
    const Matrix& train_inputs() const { return x_train_; }
    /// Lower Cholesky factor of K + jitter I.
    const Matrix& cholesky_factor() const { return chol_; }
    const Vector& alpha() const { return alpha_; }

private:
    GprModel() = default;

    Vector normalize(const Vector& x) const;
    /// Stores normalized inputs and standardized targets; true if the
    /// constant-target degenerate rule applies.
    bool init_training(const std::vector<std::pair<Vector, double>>& points,
                       const Bounds& bounds);
    Matrix cross_kernel(const Matrix& points) const;

    Matrix x_train_;  // n x D, unit box
    Vector y_train_;  // standardized
    KernelParams params_;
    Matrix chol_;
    Vector alpha_;
    double y_mean_ = 0.0;
    double y_sd_ = 1.0;
    Vector x_lo_, x_hi_;
    double log_marginal_likelihood_ = 0.0;
    bool degenerate_ = false;
};

}  // namespace elite_surge
