#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "fbkde/kernels.hpp"
#include "fbkde/qp.hpp"

namespace fbkde {

/// f_alpha = sum_i weights[i] * k(., centers.row(i)). For the vKDE each center
/// carries its own bandwidth in per_center_sigma; otherwise kernel.sigma is
/// shared. fbKDE weights may be negative.
struct WeightedDensity {
    KernelSpec kernel;
    Eigen::MatrixXd centers;   // n x d
    Eigen::VectorXd weights;   // length n
    std::optional<Eigen::VectorXd> per_center_sigma;

    void validate() const;
};

struct FitConfig {
    double sigma = 0.3;
    double radius = 1.0;        // R_n, the l1 ball radius
    double sigma_gamma = 0.0;   // per-coordinate stddev of the center jitter
    SolverSettings solver;
    std::uint64_t seed = 0;
};

/// Per-dimension z-scoring fitted on training data.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;

    static Standardizer fit(const Eigen::MatrixXd& data);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& data) const;
    Eigen::MatrixXd invert(const Eigen::MatrixXd& data) const;
};

/// Z_i = X_i + Gamma_i with spherical Gaussian jitter of scale sigma_gamma.
/// sigma_gamma = 0 returns the data unchanged.
Eigen::MatrixXd jitter_centers(const Eigen::MatrixXd& data, double sigma_gamma,
                               std::uint64_t seed);

/// Leave-one-out estimates h_i = (1/(n-1)) sum_{j != i} k(X_j, Z_i).
/// OpenMP-parallel over i; bit-identical to the serial reference.
Eigen::VectorXd loo_h(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                      const Eigen::MatrixXd& centers);
Eigen::VectorXd loo_h_serial(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                             const Eigen::MatrixXd& centers);

struct FbkdeFit {
    WeightedDensity density;
    QpSolution solution;
};

/// Jitter centers, assemble the Gram matrix and leave-one-out terms, and solve
/// the l1-constrained quadratic program for the weights.
FbkdeFit fit_fbkde(const Eigen::MatrixXd& data, const FitConfig& config,
                   KernelFamily family = KernelFamily::Gaussian);

/// Standard KDE: uniform weights 1/n centered at the data.
WeightedDensity fit_kde(const Eigen::MatrixXd& data, double sigma);

/// Variable-bandwidth KDE: sigma_i = sigma * sqrt(lambda) * f_KDE(X_i)^(-1/2)
/// with lambda the geometric mean of the pilot KDE values.
WeightedDensity fit_vkde(const Eigen::MatrixXd& data, double sigma);

double density_eval(const WeightedDensity& est, const Eigen::VectorXd& x);

/// Evaluate at every row of points. OpenMP-parallel over query points.
Eigen::VectorXd density_eval_grid(const WeightedDensity& est,
                                  const Eigen::MatrixXd& points);
Eigen::VectorXd density_eval_grid_serial(const WeightedDensity& est,
                                         const Eigen::MatrixXd& points);

/// Gram matrix of the estimator's own kernel bumps, honoring per-center
/// bandwidths (Gaussian only in that case). Used by the test criterion J^T.
Eigen::MatrixXd density_gram(const WeightedDensity& est);

}  // namespace fbkde
