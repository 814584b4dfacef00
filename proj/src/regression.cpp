#include "tjeffreys/regression.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "tjeffreys/error.hpp"
#include "tjeffreys/kernels.hpp"
#include "tjeffreys/specfun.hpp"

namespace tjeffreys {

namespace {

constexpr double kRankTol = 1e-12;

void require_positive(double value, const char* what) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

Dataset::Dataset(Eigen::VectorXd y, Eigen::MatrixXd X) : y_(std::move(y)), X_(std::move(X)) {
    if (X_.rows() != y_.size()) {
        throw ValidationError("dataset: X has " + std::to_string(X_.rows()) + " rows but y has " +
                              std::to_string(y_.size()) + " entries");
    }
    if (X_.cols() < 1) throw ValidationError("dataset: need at least one covariate (p >= 1)");
    if (!(y_.size() > X_.cols())) {
        throw ValidationError("dataset: need n > p, got n=" + std::to_string(y_.size()) +
                              ", p=" + std::to_string(X_.cols()));
    }
    if (!y_.allFinite() || !X_.allFinite()) throw ValidationError("dataset: non-finite entries");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X_);
    if (qr.rank() < X_.cols()) throw RankDeficiencyError("dataset: design matrix does not have full column rank");
}

Dataset Dataset::with_intercept() const {
    Eigen::MatrixXd augmented(X_.rows(), X_.cols() + 1);
    augmented.col(0).setOnes();
    augmented.rightCols(X_.cols()) = X_;
    return Dataset(y_, std::move(augmented));
}

MixingVector::MixingVector(Eigen::VectorXd values) : values_(std::move(values)) {
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
            throw DomainError("mixing vector entries must be positive and finite");
        }
    }
}

WlsDecomposition weighted_regression(const Dataset& data, const MixingVector& lambda) {
    const int n = data.n();
    const int p = data.p();
    if (lambda.size() != n) throw DomainError("mixing vector length does not match the dataset");

    const Eigen::ArrayXd root = lambda.values().array().sqrt();
    Eigen::MatrixXd stacked(n, p + 1);
    stacked.leftCols(p) = data.X().array().colwise() * root;
    stacked.col(p) = data.y().array() * root;

    // QR of the stacked matrix: R_xx is the factor of D^{1/2}X, R_xy holds Q'D^{1/2}y
    // and the last diagonal entry is ±√S².
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(stacked);
    const Eigen::MatrixXd r_full = qr.matrixQR().topRows(p + 1).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd R = r_full.topLeftCorner(p, p);

    const double scale = R.diagonal().cwiseAbs().maxCoeff();
    for (int j = 0; j < p; ++j) {
        if (!(std::abs(R(j, j)) > kRankTol * scale)) {
            throw RankDeficiencyError("weighted regression: D^{1/2}X is rank deficient");
        }
    }

    WlsDecomposition out;
    out.R = R;
    out.A = R.transpose() * R;
    out.b = R.triangularView<Eigen::Upper>().solve(r_full.col(p).head(p));
    const double tail = r_full(p, p);
    out.s2 = std::max(0.0, tail * tail);
    return out;
}

Eigen::VectorXd residuals(const Eigen::VectorXd& beta, const Dataset& data) {
    if (beta.size() != data.p()) throw DomainError("beta has the wrong length");
    Eigen::VectorXd r = data.y();
    std::span<double> out{r.data(), static_cast<std::size_t>(r.size())};
    for (int j = 0; j < data.p(); ++j) {
        const auto column = data.X().col(j);
        kernels::axpy(-beta[j], {column.data(), static_cast<std::size_t>(column.size())}, out);
    }
    return r;
}

double weighted_residual_sum_squares(const Eigen::VectorXd& beta, const MixingVector& lambda, const Dataset& data) {
    const Eigen::VectorXd r = residuals(beta, data);
    return kernels::weighted_sum_squares(as_span(lambda.values()), as_span(r));
}

double student_t_loglik(const Eigen::VectorXd& beta, double sigma2, double nu, const Dataset& data) {
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    const Eigen::VectorXd r = residuals(beta, data);
    const double n = data.n();
    const double log_norm = specfun::log_gamma(0.5 * (nu + 1.0)) - specfun::log_gamma(0.5 * nu) -
                            0.5 * std::log(nu * std::numbers::pi);
    double kernel = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) kernel += std::log1p(r[i] * r[i] / (sigma2 * nu));
    return n * log_norm - 0.5 * (nu + 1.0) * kernel - 0.5 * n * std::log(sigma2);
}

double normal_loglik(const Eigen::VectorXd& beta, double sigma2, const Dataset& data) {
    require_positive(sigma2, "sigma2");
    const Eigen::VectorXd r = residuals(beta, data);
    const double n = data.n();
    return -0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - 0.5 * r.squaredNorm() / sigma2;
}

double mixing_density_log(double lambda, double nu) {
    require_positive(lambda, "lambda");
    require_positive(nu, "nu");
    const double k = 0.5 * nu;
    return k * std::log(k) - specfun::log_gamma(k) + (k - 1.0) * std::log(lambda) - k * lambda;
}

double augmented_joint_logdensity(const Eigen::VectorXd& beta, double sigma2, double nu, const MixingVector& lambda,
                                  const Dataset& data, const PriorSpec& spec) {
    require_positive(sigma2, "sigma2");
    require_positive(nu, "nu");
    if (beta.size() != data.p()) throw DomainError("beta has the wrong length");
    const WlsDecomposition wls = weighted_regression(data, lambda);
    const Eigen::VectorXd delta = beta - wls.b;
    const double quadratic = (wls.R * delta).squaredNorm() + wls.s2;

    const double n = data.n();
    double log_lambda = 0.0;
    double mixing = 0.0;
    for (int i = 0; i < data.n(); ++i) {
        log_lambda += std::log(lambda[i]);
        mixing += mixing_density_log(lambda[i], nu);
    }
    return 0.5 * log_lambda - 0.5 * n * std::log(2.0 * std::numbers::pi * sigma2) - quadratic / (2.0 * sigma2) +
           mixing + full_prior_log(beta, sigma2, nu, spec);
}

}  // namespace tjeffreys
