#pragma once

#include <Eigen/Dense>
#include <optional>

#include "fbkde/estimator.hpp"
#include "fbkde/synthetic.hpp"

namespace fbkde {

struct EvalReport {
    double j_test = 0.0;
    std::optional<double> sup_error;   // synthetic ground truth only
    std::optional<double> ise;         // synthetic, d = 1 only
    double hoeffding_bound = 0.0;
    int n_train = 0;
    int n_test = 0;
};

/// Held-out criterion J^T: alpha' G alpha - 2 sum_i alpha_i mean_l k(x_l, Z_i).
/// Lower is better; negative values are expected for good fits.
double j_test(const WeightedDensity& est, const Eigen::MatrixXd& test_points);

/// Uniform 1-D evaluation grid, count points over [lo, hi].
Eigen::MatrixXd eval_grid_1d(double lo, double hi, int count);

/// max over grid rows of |pdf(x) - est(x)|. Grid-based, d <= 2.
double sup_error(const WeightedDensity& est, const MixtureDensity& density,
                 const Eigen::MatrixXd& grid);

/// Simpson quadrature of (pdf - est)^2 over [lo, hi]; d = 1, intervals even.
double ise(const WeightedDensity& est, const MixtureDensity& density, double lo,
           double hi, int intervals = 4096);

/// epsilon = sqrt(8 C_k^2 R^2 log(2n/delta) / (n-1)), the inversion of the
/// concentration level delta = 2n exp(-(n-1) eps^2 / (8 C_k^2 R^2)).
double hoeffding_bound(int n, double radius, double c_k, double delta);

}  // namespace fbkde
