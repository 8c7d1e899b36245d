#include "fbkde/estimator.hpp"

#include <cmath>
#include <stdexcept>

#include "fbkde/rng.hpp"

namespace fbkde {

void WeightedDensity::validate() const {
    kernel.validate();
    if (centers.rows() != weights.size())
        throw std::invalid_argument("WeightedDensity: |centers| != |weights|");
    if (centers.cols() != kernel.dim)
        throw std::invalid_argument("WeightedDensity: center dimension mismatch");
    if (per_center_sigma) {
        if (per_center_sigma->size() != centers.rows())
            throw std::invalid_argument("WeightedDensity: per_center_sigma length mismatch");
        if ((per_center_sigma->array() <= 0.0).any())
            throw std::invalid_argument("WeightedDensity: per-center bandwidths must be positive");
    }
}

Standardizer Standardizer::fit(const Eigen::MatrixXd& data) {
    if (data.rows() < 2)
        throw std::invalid_argument("Standardizer: need at least 2 samples");
    Standardizer s;
    s.mean = data.colwise().mean();
    const Eigen::Index n = data.rows();
    s.stddev.resize(data.cols());
    for (Eigen::Index l = 0; l < data.cols(); ++l) {
        const double var =
            (data.col(l).array() - s.mean[l]).square().sum() / static_cast<double>(n - 1);
        s.stddev[l] = std::sqrt(var);
        if (!(s.stddev[l] > 0.0))
            throw std::invalid_argument("Standardizer: degenerate feature with zero variance");
    }
    return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& data) const {
    if (data.cols() != mean.size())
        throw std::invalid_argument("Standardizer: dimension mismatch");
    return (data.rowwise() - mean.transpose()).array().rowwise() /
           stddev.transpose().array();
}

Eigen::MatrixXd Standardizer::invert(const Eigen::MatrixXd& data) const {
    if (data.cols() != mean.size())
        throw std::invalid_argument("Standardizer: dimension mismatch");
    return (data.array().rowwise() * stddev.transpose().array()).matrix().rowwise() +
           mean.transpose();
}

Eigen::MatrixXd jitter_centers(const Eigen::MatrixXd& data, double sigma_gamma,
                               std::uint64_t seed) {
    if (sigma_gamma < 0.0)
        throw std::invalid_argument("jitter_centers: sigma_gamma must be >= 0");
    if (sigma_gamma == 0.0) return data;
    Rng rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma_gamma);
    Eigen::MatrixXd centers = data;
    for (Eigen::Index i = 0; i < centers.rows(); ++i)
        for (Eigen::Index l = 0; l < centers.cols(); ++l)
            centers(i, l) += gauss(rng);
    return centers;
}

namespace {

double loo_h_entry(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                   const Eigen::MatrixXd& centers, Eigen::Index i) {
    const Eigen::Index n = data.rows();
    double total = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        total += kernel_eval_rows(kernel, data, j, centers, i);
    }
    return total / static_cast<double>(n - 1);
}

void check_loo_inputs(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                      const Eigen::MatrixXd& centers) {
    kernel.validate();
    if (data.rows() < 2)
        throw std::invalid_argument("loo_h: need n >= 2 for the leave-one-out estimator");
    if (data.rows() != centers.rows())
        throw std::invalid_argument("loo_h: |data| != |centers|");
    if (data.cols() != kernel.dim || centers.cols() != kernel.dim)
        throw std::invalid_argument("loo_h: dimension mismatch");
}

}  // namespace

Eigen::VectorXd loo_h_serial(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                             const Eigen::MatrixXd& centers) {
    check_loo_inputs(kernel, data, centers);
    const Eigen::Index n = data.rows();
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) h[i] = loo_h_entry(kernel, data, centers, i);
    return h;
}

Eigen::VectorXd loo_h(const KernelSpec& kernel, const Eigen::MatrixXd& data,
                      const Eigen::MatrixXd& centers) {
    check_loo_inputs(kernel, data, centers);
    const Eigen::Index n = data.rows();
    Eigen::VectorXd h(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) h[i] = loo_h_entry(kernel, data, centers, i);
    return h;
}

FbkdeFit fit_fbkde(const Eigen::MatrixXd& data, const FitConfig& config,
                   KernelFamily family) {
    if (data.rows() < 2) throw std::invalid_argument("fit_fbkde: need n >= 2");
    if (!(config.sigma > 0.0) || !(config.radius > 0.0))
        throw std::invalid_argument("fit_fbkde: sigma and radius must be positive");

    const KernelSpec kernel{family, config.sigma, static_cast<int>(data.cols())};
    const Eigen::MatrixXd centers = jitter_centers(data, config.sigma_gamma, config.seed);

    QpProblem problem;
    problem.gram = gram_matrix(kernel, centers);
    problem.h = loo_h(kernel, data, centers);
    problem.radius = config.radius;

    FbkdeFit fit;
    fit.solution = solve_qp(problem, config.solver);
    fit.density = WeightedDensity{kernel, centers, fit.solution.alpha, std::nullopt};
    return fit;
}

WeightedDensity fit_kde(const Eigen::MatrixXd& data, double sigma) {
    if (data.rows() < 1) throw std::invalid_argument("fit_kde: empty data");
    if (!(sigma > 0.0)) throw std::invalid_argument("fit_kde: sigma must be positive");
    const Eigen::Index n = data.rows();
    const KernelSpec kernel{KernelFamily::Gaussian, sigma, static_cast<int>(data.cols())};
    return WeightedDensity{kernel, data,
                           Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n)),
                           std::nullopt};
}

WeightedDensity fit_vkde(const Eigen::MatrixXd& data, double sigma) {
    WeightedDensity pilot = fit_kde(data, sigma);
    const Eigen::Index n = data.rows();

    const Eigen::VectorXd pilot_values = density_eval_grid(pilot, data);
    double log_sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(pilot_values[i] > 0.0))
            throw std::runtime_error("fit_vkde: nonpositive pilot density value");
        log_sum += std::log(pilot_values[i]);
    }
    // lambda = geometric mean of pilot values, computed in log space.
    const double log_lambda = log_sum / static_cast<double>(n);

    Eigen::VectorXd sigmas(n);
    for (Eigen::Index i = 0; i < n; ++i)
        sigmas[i] = sigma * std::exp(0.5 * (log_lambda - std::log(pilot_values[i])));

    WeightedDensity out = pilot;
    out.per_center_sigma = sigmas;
    return out;
}

namespace {

double density_eval_row(const WeightedDensity& est, const Eigen::MatrixXd& points,
                        Eigen::Index p) {
    const Eigen::Index n = est.centers.rows();
    double value = 0.0;
    if (est.per_center_sigma) {
        KernelSpec spec = est.kernel;
        for (Eigen::Index i = 0; i < n; ++i) {
            spec.sigma = (*est.per_center_sigma)[i];
            value += est.weights[i] * kernel_eval_rows(spec, points, p, est.centers, i);
        }
    } else {
        for (Eigen::Index i = 0; i < n; ++i)
            value += est.weights[i] * kernel_eval_rows(est.kernel, points, p, est.centers, i);
    }
    return value;
}

}  // namespace

double density_eval(const WeightedDensity& est, const Eigen::VectorXd& x) {
    est.validate();
    if (x.size() != est.kernel.dim)
        throw std::invalid_argument("density_eval: dimension mismatch");
    const Eigen::MatrixXd point = x.transpose();
    return density_eval_row(est, point, 0);
}

Eigen::VectorXd density_eval_grid_serial(const WeightedDensity& est,
                                         const Eigen::MatrixXd& points) {
    est.validate();
    if (points.cols() != est.kernel.dim)
        throw std::invalid_argument("density_eval_grid: dimension mismatch");
    Eigen::VectorXd values(points.rows());
    for (Eigen::Index p = 0; p < points.rows(); ++p)
        values[p] = density_eval_row(est, points, p);
    return values;
}

Eigen::VectorXd density_eval_grid(const WeightedDensity& est,
                                  const Eigen::MatrixXd& points) {
    est.validate();
    if (points.cols() != est.kernel.dim)
        throw std::invalid_argument("density_eval_grid: dimension mismatch");
    Eigen::VectorXd values(points.rows());
#pragma omp parallel for schedule(static)
    for (Eigen::Index p = 0; p < points.rows(); ++p)
        values[p] = density_eval_row(est, points, p);
    return values;
}

Eigen::MatrixXd density_gram(const WeightedDensity& est) {
    est.validate();
    if (!est.per_center_sigma) return gram_matrix(est.kernel, est.centers);
    if (est.kernel.family != KernelFamily::Gaussian)
        throw std::invalid_argument("density_gram: per-center bandwidths require Gaussian kernel");
    const Eigen::Index n = est.centers.rows();
    const Eigen::VectorXd& sigmas = *est.per_center_sigma;
    Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = gaussian_cross_integral(
                est.centers.row(i).transpose(), est.centers.row(j).transpose(),
                sigmas[i], sigmas[j]);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

}  // namespace fbkde
