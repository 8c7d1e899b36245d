#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "fbkde/estimator.hpp"

namespace fbkde {

/// Uniform box-kernel grid on [0,1]^d: sigma = 1/(2q), (mq)^d cells and
/// centers. The kernel centered at multi-index iota covers the m cells per
/// dimension starting at cell iota.
struct BoxGrid {
    int q = 1;
    int m = 1;
    int d = 1;

    double sigma() const { return 0.5 / q; }
    int side() const { return m * q; }
    long total() const;

    /// Grid centers y_i = ((iota_1 - 1)/(mq) + sigma, ...), rows in flat order.
    Eigen::MatrixXd centers() const;

    /// Cell representative point x_bar_i = (iota_1/(mq), ..., iota_d/(mq)).
    Eigen::VectorXd cell_point(long i) const;

    /// Flat index of the cell containing x; boundary points go to the
    /// lexicographically smallest containing cell.
    long cell_of(const Eigen::VectorXd& x) const;

    void validate() const;
};

/// 1-based flat index <-> 1-based multi-index, i = 1 + sum (iota_l - 1) (mq)^(l-1).
std::vector<int> multi_index(long i, int mq, int d);
long flat_index(const std::vector<int>& iota, int mq);

using ScalarField = std::function<double(const Eigen::VectorXd&)>;

struct BoxBeta {
    Eigen::VectorXd beta;     // length (mq)^d, flat-index order
    double l1_bound = 0.0;    // (mq)^(d-1) ((q+1)/2)^2 (q f(0) + L_f sqrt(d))
};

/// Signed coefficients such that sum_i beta_i (2 sigma)^d k(., y_i) equals the
/// piecewise-constant function sum_i f(x_bar_i) 1{T_i} on cell interiors. The
/// recursion walks cells in flat-index order, subtracting the already-placed
/// kernels that cover the current cell.
BoxBeta box_beta(const ScalarField& f, double lipschitz, int q, int m, int d);

/// Value of the box-kernel sum sum_i beta_i (2 sigma)^d k(x, y_i).
double box_reconstruct(const BoxBeta& coeffs, const BoxGrid& grid,
                       const Eigen::VectorXd& x);

/// (measured ||f - f_m||_2 by per-cell midpoint quadrature, bound L_f sqrt(d)/(mq)).
/// d <= 2 only.
std::pair<double, double> box_approx_error(const ScalarField& f, double lipschitz,
                                           int q, int m, int d);

/// fbKDE with box kernel and the data-independent grid centers. The centers do
/// not depend on the sample, so h_i is the full-sample average
/// (1/n) sum_j k(X_j, y_i) rather than a leave-one-out sum. config.sigma is
/// ignored: the box bandwidth is 1/(2q). Data outside [0,1]^d is clamped when
/// clamp_data is set and rejected otherwise.
FbkdeFit fit_box_fbkde(const Eigen::MatrixXd& data, int q, int m,
                       const FitConfig& config, bool clamp_data = false);

}  // namespace fbkde
