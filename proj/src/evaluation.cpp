#include "fbkde/evaluation.hpp"

#include <cmath>
#include <stdexcept>

namespace fbkde {

double j_test(const WeightedDensity& est, const Eigen::MatrixXd& test_points) {
    est.validate();
    if (test_points.rows() < 1) throw std::invalid_argument("j_test: empty test set");
    if (test_points.cols() != est.kernel.dim)
        throw std::invalid_argument("j_test: dimension mismatch");

    const Eigen::MatrixXd gram = density_gram(est);
    const double quadratic = est.weights.dot(gram * est.weights);

    const Eigen::Index n = est.centers.rows();
    const Eigen::Index n_t = test_points.rows();
    double cross = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : cross)
    for (Eigen::Index i = 0; i < n; ++i) {
        KernelSpec spec = est.kernel;
        if (est.per_center_sigma) spec.sigma = (*est.per_center_sigma)[i];
        double mean = 0.0;
        for (Eigen::Index l = 0; l < n_t; ++l)
            mean += kernel_eval_rows(spec, test_points, l, est.centers, i);
        cross += est.weights[i] * mean / static_cast<double>(n_t);
    }
    return quadratic - 2.0 * cross;
}

Eigen::MatrixXd eval_grid_1d(double lo, double hi, int count) {
    if (count < 2 || !(lo < hi)) throw std::invalid_argument("eval_grid_1d: bad grid spec");
    Eigen::MatrixXd grid(count, 1);
    grid.col(0) = Eigen::VectorXd::LinSpaced(count, lo, hi);
    return grid;
}

double sup_error(const WeightedDensity& est, const MixtureDensity& density,
                 const Eigen::MatrixXd& grid) {
    est.validate();
    density.validate();
    if (est.kernel.dim > 2) throw std::invalid_argument("sup_error: d <= 2 only");
    if (grid.cols() != est.kernel.dim || grid.cols() != density.dim())
        throw std::invalid_argument("sup_error: dimension mismatch");
    const Eigen::VectorXd est_values = density_eval_grid(est, grid);
    double worst = 0.0;
    for (Eigen::Index p = 0; p < grid.rows(); ++p) {
        const double truth = pdf(density, grid.row(p).transpose());
        worst = std::max(worst, std::abs(truth - est_values[p]));
    }
    return worst;
}

double ise(const WeightedDensity& est, const MixtureDensity& density, double lo,
           double hi, int intervals) {
    est.validate();
    density.validate();
    if (est.kernel.dim != 1 || density.dim() != 1)
        throw std::invalid_argument("ise: d = 1 only");
    if (intervals < 2 || intervals % 2 != 0)
        throw std::invalid_argument("ise: intervals must be even and >= 2");
    if (!(lo < hi)) throw std::invalid_argument("ise: empty range");

    const Eigen::MatrixXd grid = eval_grid_1d(lo, hi, intervals + 1);
    const Eigen::VectorXd est_values = density_eval_grid(est, grid);
    const double h = (hi - lo) / intervals;
    double total = 0.0;
    for (int p = 0; p <= intervals; ++p) {
        const double diff = pdf(density, grid.row(p).transpose()) - est_values[p];
        const double g = diff * diff;
        const double w = (p == 0 || p == intervals) ? 1.0 : (p % 2 == 1 ? 4.0 : 2.0);
        total += w * g;
    }
    return total * h / 3.0;
}

double hoeffding_bound(int n, double radius, double c_k, double delta) {
    if (n < 2) throw std::invalid_argument("hoeffding_bound: n must be >= 2");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("hoeffding_bound: delta must be in (0,1)");
    if (!(radius > 0.0) || !(c_k > 0.0))
        throw std::invalid_argument("hoeffding_bound: radius and C_k must be positive");
    return std::sqrt(8.0 * c_k * c_k * radius * radius *
                     std::log(2.0 * n / delta) / (n - 1));
}

}  // namespace fbkde
