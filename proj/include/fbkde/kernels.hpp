#pragma once

#include <Eigen/Dense>

namespace fbkde {

enum class KernelFamily { Gaussian, Box };

/// A kernel family together with its bandwidth and ambient dimension.
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double sigma = 1.0;
    int dim = 1;

    /// Uniform bound C_k = sup k(x,y). Equals the diagonal value k(x,x).
    double sup_bound() const;

    /// Throws std::invalid_argument on sigma <= 0 or dim < 1.
    void validate() const;
};

/// Pointwise kernel value k(x, y).
/// Gaussian: (2*pi*sigma^2)^(-d/2) * exp(-||x-y||^2 / (2 sigma^2)).
/// Box: (2 sigma)^(-d) * 1{||x-y||_inf <= sigma}.
double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y);

/// Integral of k(x,a)*k(x,b) over R^d with Lebesgue measure.
/// Gaussian: the Gaussian kernel with bandwidth sqrt(2)*sigma at (a,b).
/// Box: product over coordinates of max(0, 2 sigma - |a_l - b_l|) / (2 sigma)^(2d).
double cross_integral(const KernelSpec& spec, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b);

/// Cross-integral of two Gaussian kernels with distinct bandwidths:
/// integral of k_sa(x,a) k_sb(x,b) dx = N(a - b; 0, (sa^2 + sb^2) I).
double gaussian_cross_integral(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               double sigma_a, double sigma_b);

/// Gram matrix G[i][j] = cross_integral(spec, centers.row(i), centers.row(j)).
/// Centers are rows of an n x d matrix. OpenMP-parallel over entries; each
/// entry is computed by a single thread so results are bit-identical to the
/// serial reference regardless of thread count.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& centers);

/// Serial reference for gram_matrix; kept for testing and benchmarks.
Eigen::MatrixXd gram_matrix_serial(const KernelSpec& spec,
                                   const Eigen::MatrixXd& centers);

/// Cross-integral between rows i of A and j of B, without forming row copies.
/// Exposed for the hot loops in the estimator module.
double cross_integral_rows(const KernelSpec& spec, const Eigen::MatrixXd& a,
                           Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j);

/// Kernel value between rows i of A and j of B.
double kernel_eval_rows(const KernelSpec& spec, const Eigen::MatrixXd& a,
                        Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j);

}  // namespace fbkde
