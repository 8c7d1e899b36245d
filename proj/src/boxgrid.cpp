#include "fbkde/boxgrid.hpp"

#include <cmath>
#include <stdexcept>

namespace fbkde {

void BoxGrid::validate() const {
    if (q < 1 || m < 1 || d < 1)
        throw std::invalid_argument("BoxGrid: q, m, d must be positive integers");
}

long BoxGrid::total() const {
    long t = 1;
    for (int l = 0; l < d; ++l) t *= side();
    return t;
}

std::vector<int> multi_index(long i, int mq, int d) {
    long total = 1;
    for (int l = 0; l < d; ++l) total *= mq;
    if (i < 1 || i > total) throw std::invalid_argument("multi_index: flat index out of range");
    std::vector<int> iota(d);
    long rem = i - 1;
    for (int l = 0; l < d; ++l) {
        iota[l] = static_cast<int>(rem % mq) + 1;
        rem /= mq;
    }
    return iota;
}

long flat_index(const std::vector<int>& iota, int mq) {
    long i = 1;
    long stride = 1;
    for (std::size_t l = 0; l < iota.size(); ++l) {
        if (iota[l] < 1 || iota[l] > mq)
            throw std::invalid_argument("flat_index: multi-index out of range");
        i += static_cast<long>(iota[l] - 1) * stride;
        stride *= mq;
    }
    return i;
}

Eigen::MatrixXd BoxGrid::centers() const {
    validate();
    const long n = total();
    const int mq = side();
    Eigen::MatrixXd y(n, d);
    for (long i = 1; i <= n; ++i) {
        const std::vector<int> iota = multi_index(i, mq, d);
        for (int l = 0; l < d; ++l)
            y(i - 1, l) = static_cast<double>(iota[l] - 1) / mq + sigma();
    }
    return y;
}

Eigen::VectorXd BoxGrid::cell_point(long i) const {
    validate();
    const std::vector<int> iota = multi_index(i, side(), d);
    Eigen::VectorXd x(d);
    for (int l = 0; l < d; ++l) x[l] = static_cast<double>(iota[l]) / side();
    return x;
}

long BoxGrid::cell_of(const Eigen::VectorXd& x) const {
    validate();
    if (x.size() != d) throw std::invalid_argument("BoxGrid::cell_of: dimension mismatch");
    const int mq = side();
    std::vector<int> iota(d);
    for (int l = 0; l < d; ++l) {
        if (x[l] < 0.0 || x[l] > 1.0)
            throw std::invalid_argument("BoxGrid::cell_of: point outside [0,1]^d");
        // ceil(x * mq) sends boundary points to the lower (lexicographically
        // smaller) cell; x = 0 belongs to cell 1.
        const int cell = std::max(1, static_cast<int>(std::ceil(x[l] * mq)));
        iota[l] = std::min(cell, mq);
    }
    return flat_index(iota, mq);
}

namespace {

// Visit every multi-index in the box [lo, hi] (component-wise, inclusive).
template <typename Fn>
void for_each_in_box(const std::vector<int>& lo, const std::vector<int>& hi, Fn&& fn) {
    const int d = static_cast<int>(lo.size());
    std::vector<int> cursor = lo;
    while (true) {
        fn(cursor);
        int l = 0;
        for (; l < d; ++l) {
            if (cursor[l] < hi[l]) {
                ++cursor[l];
                break;
            }
            cursor[l] = lo[l];
        }
        if (l == d) break;
    }
}

}  // namespace

BoxBeta box_beta(const ScalarField& f, double lipschitz, int q, int m, int d) {
    const BoxGrid grid{q, m, d};
    grid.validate();
    if (lipschitz < 0.0) throw std::invalid_argument("box_beta: negative Lipschitz constant");
    const int mq = grid.side();
    const long n = grid.total();

    BoxBeta out;
    out.beta.resize(n);
    for (long i = 1; i <= n; ++i) {
        const std::vector<int> iota = multi_index(i, mq, d);
        std::vector<int> lo(d);
        for (int l = 0; l < d; ++l) lo[l] = std::max(1, iota[l] - (m - 1));

        double covered = 0.0;
        for_each_in_box(lo, iota, [&](const std::vector<int>& kappa) {
            const long k = flat_index(kappa, mq);
            if (k != i) covered += out.beta[k - 1];
        });

        const double value = f(grid.cell_point(i));
        if (!std::isfinite(value))
            throw std::invalid_argument("box_beta: non-finite function value");
        out.beta[i - 1] = value - covered;
    }

    Eigen::VectorXd origin = Eigen::VectorXd::Zero(d);
    const double f0 = f(origin);
    const double half = 0.5 * (q + 1);
    out.l1_bound = std::pow(static_cast<double>(mq), d - 1) * half * half *
                   (q * f0 + lipschitz * std::sqrt(static_cast<double>(d)));
    return out;
}

double box_reconstruct(const BoxBeta& coeffs, const BoxGrid& grid,
                       const Eigen::VectorXd& x) {
    grid.validate();
    if (coeffs.beta.size() != grid.total())
        throw std::invalid_argument("box_reconstruct: coefficient length mismatch");
    const KernelSpec kernel{KernelFamily::Box, grid.sigma(), grid.d};
    const Eigen::MatrixXd centers = grid.centers();
    const double cell_volume = std::pow(2.0 * grid.sigma(), grid.d);
    double value = 0.0;
    for (long i = 0; i < coeffs.beta.size(); ++i)
        value += coeffs.beta[i] * cell_volume *
                 kernel_eval(kernel, x, centers.row(i).transpose());
    return value;
}

std::pair<double, double> box_approx_error(const ScalarField& f, double lipschitz,
                                           int q, int m, int d) {
    if (d > 2) throw std::invalid_argument("box_approx_error: quadrature supports d <= 2");
    const BoxGrid grid{q, m, d};
    grid.validate();
    const int mq = grid.side();
    const double cell_width = 1.0 / mq;

    // Composite midpoint per cell; f_m is constant on cell interiors so only
    // f's smoothness limits accuracy.
    const int sub = d == 1 ? 256 : 48;
    double integral = 0.0;
    const long n = grid.total();
    for (long i = 1; i <= n; ++i) {
        const double cell_value = f(grid.cell_point(i));
        const std::vector<int> iota = multi_index(i, mq, d);
        if (d == 1) {
            const double x0 = (iota[0] - 1) * cell_width;
            const double h = cell_width / sub;
            Eigen::VectorXd x(1);
            for (int s = 0; s < sub; ++s) {
                x[0] = x0 + (s + 0.5) * h;
                const double diff = f(x) - cell_value;
                integral += diff * diff * h;
            }
        } else {
            const double x0 = (iota[0] - 1) * cell_width;
            const double y0 = (iota[1] - 1) * cell_width;
            const double h = cell_width / sub;
            Eigen::VectorXd x(2);
            for (int s = 0; s < sub; ++s)
                for (int t = 0; t < sub; ++t) {
                    x[0] = x0 + (s + 0.5) * h;
                    x[1] = y0 + (t + 0.5) * h;
                    const double diff = f(x) - cell_value;
                    integral += diff * diff * h * h;
                }
        }
    }

    const double bound = lipschitz * std::sqrt(static_cast<double>(d)) / mq;
    return {std::sqrt(integral), bound};
}

FbkdeFit fit_box_fbkde(const Eigen::MatrixXd& data, int q, int m,
                       const FitConfig& config, bool clamp_data) {
    const BoxGrid grid{q, m, static_cast<int>(data.cols())};
    grid.validate();
    if (data.rows() < 1) throw std::invalid_argument("fit_box_fbkde: empty data");
    if (!(config.radius > 0.0))
        throw std::invalid_argument("fit_box_fbkde: radius must be positive");

    Eigen::MatrixXd x = data;
    if (clamp_data) {
        x = x.cwiseMax(0.0).cwiseMin(1.0);
    } else if ((x.array() < 0.0).any() || (x.array() > 1.0).any()) {
        throw std::invalid_argument("fit_box_fbkde: data outside [0,1]^d");
    }

    const KernelSpec kernel{KernelFamily::Box, grid.sigma(), grid.d};
    const Eigen::MatrixXd centers = grid.centers();
    const Eigen::Index n_data = x.rows();
    const Eigen::Index n_centers = centers.rows();

    QpProblem problem;
    problem.gram = gram_matrix(kernel, centers);
    problem.radius = config.radius;
    problem.h.resize(n_centers);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n_centers; ++i) {
        double total = 0.0;
        for (Eigen::Index j = 0; j < n_data; ++j)
            total += kernel_eval_rows(kernel, x, j, centers, i);
        problem.h[i] = total / static_cast<double>(n_data);
    }

    FbkdeFit fit;
    fit.solution = solve_qp(problem, config.solver);
    fit.density = WeightedDensity{kernel, centers, fit.solution.alpha, std::nullopt};
    return fit;
}

}  // namespace fbkde
