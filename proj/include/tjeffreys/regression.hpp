#pragma once

#include <Eigen/Dense>

#include "tjeffreys/priors.hpp"

namespace tjeffreys {

/// Response y (length n) and design X (n × p, rows are observations).
/// Construction validates n > p >= 1, finiteness and full column rank.
class Dataset {
public:
    Dataset(Eigen::VectorXd y, Eigen::MatrixXd X);

    const Eigen::VectorXd& y() const { return y_; }
    const Eigen::MatrixXd& X() const { return X_; }
    int n() const { return static_cast<int>(y_.size()); }
    int p() const { return static_cast<int>(X_.cols()); }

    /// Copy with a leading column of ones.
    Dataset with_intercept() const;

private:
    Eigen::VectorXd y_;
    Eigen::MatrixXd X_;
};

/// Latent precisions λ_1..λ_n, all strictly positive.
class MixingVector {
public:
    explicit MixingVector(Eigen::VectorXd values);
    static MixingVector ones(int n) { return MixingVector(Eigen::VectorXd::Ones(n)); }

    const Eigen::VectorXd& values() const { return values_; }
    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }

private:
    Eigen::VectorXd values_;
};

/// A = X'DX, b = A⁻¹X'Dy, s2 = S²(D, y). R is the upper-triangular factor of
/// D^{1/2}X, so A = R'R.
struct WlsDecomposition {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    double s2 = 0.0;
    Eigen::MatrixXd R;
};

/// Householder QR of D^{1/2}[X | y]; S² is the squared norm of the part of
/// D^{1/2}y orthogonal to the column space, so it is nonnegative by construction.
WlsDecomposition weighted_regression(const Dataset& data, const MixingVector& lambda);

/// Σ log t_ν((y_i - x_i'β)/σ) - (n/2) log σ².
double student_t_loglik(const Eigen::VectorXd& beta, double sigma2, double nu, const Dataset& data);

/// Gaussian log-likelihood, the ν → ∞ limit of student_t_loglik.
double normal_loglik(const Eigen::VectorXd& beta, double sigma2, const Dataset& data);

/// log Gamma(λ | shape ν/2, rate ν/2); the distribution has mean 1.
double mixing_density_log(double lambda, double nu);

/// Log of the joint density of (y, λ) given (β, σ², ν) times the prior:
///   Σ ½ log λ_i - (n/2) log(2πσ²) - [(β-b)'A(β-b) + S²]/(2σ²)
///   + Σ log f_G(λ_i | ν) + full_prior_log.
/// Integrating λ out recovers student_t_loglik + full_prior_log.
double augmented_joint_logdensity(const Eigen::VectorXd& beta, double sigma2, double nu, const MixingVector& lambda,
                                  const Dataset& data, const PriorSpec& spec);

/// Σ λ_i (y_i - x_i'β)²
double weighted_residual_sum_squares(const Eigen::VectorXd& beta, const MixingVector& lambda, const Dataset& data);

/// y - Xβ
Eigen::VectorXd residuals(const Eigen::VectorXd& beta, const Dataset& data);

}  // namespace tjeffreys
