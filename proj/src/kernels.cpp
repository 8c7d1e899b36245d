#include "fbkde/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fbkde {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dims(const KernelSpec& spec, Eigen::Index nx, Eigen::Index ny) {
    if (nx != spec.dim || ny != spec.dim)
        throw std::invalid_argument("kernel: point dimension does not match spec.dim");
}

double gauss_value(double sqdist, double sigma, int d) {
    const double s2 = sigma * sigma;
    return std::pow(kTwoPi * s2, -0.5 * d) * std::exp(-sqdist / (2.0 * s2));
}

}  // namespace

double KernelSpec::sup_bound() const {
    switch (family) {
        case KernelFamily::Gaussian:
            return std::pow(kTwoPi * sigma * sigma, -0.5 * dim);
        case KernelFamily::Box:
            return std::pow(2.0 * sigma, -static_cast<double>(dim));
    }
    throw std::logic_error("unknown kernel family");
}

void KernelSpec::validate() const {
    if (!(sigma > 0.0)) throw std::invalid_argument("KernelSpec: sigma must be positive");
    if (dim < 1) throw std::invalid_argument("KernelSpec: dim must be >= 1");
}

double kernel_eval(const KernelSpec& spec, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& y) {
    spec.validate();
    check_dims(spec, x.size(), y.size());
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return gauss_value((x - y).squaredNorm(), spec.sigma, spec.dim);
        case KernelFamily::Box: {
            const double linf = (x - y).lpNorm<Eigen::Infinity>();
            return linf <= spec.sigma ? spec.sup_bound() : 0.0;
        }
    }
    throw std::logic_error("unknown kernel family");
}

double cross_integral(const KernelSpec& spec, const Eigen::VectorXd& a,
                      const Eigen::VectorXd& b) {
    spec.validate();
    check_dims(spec, a.size(), b.size());
    switch (spec.family) {
        case KernelFamily::Gaussian:
            return gauss_value((a - b).squaredNorm(), std::numbers::sqrt2 * spec.sigma,
                               spec.dim);
        case KernelFamily::Box: {
            const double w = 2.0 * spec.sigma;
            double overlap = 1.0;
            for (Eigen::Index l = 0; l < a.size(); ++l)
                overlap *= std::max(0.0, w - std::abs(a[l] - b[l]));
            return overlap / std::pow(w, 2.0 * spec.dim);
        }
    }
    throw std::logic_error("unknown kernel family");
}

double gaussian_cross_integral(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                               double sigma_a, double sigma_b) {
    if (!(sigma_a > 0.0) || !(sigma_b > 0.0))
        throw std::invalid_argument("gaussian_cross_integral: bandwidths must be positive");
    if (a.size() != b.size())
        throw std::invalid_argument("gaussian_cross_integral: dimension mismatch");
    const double v = sigma_a * sigma_a + sigma_b * sigma_b;
    const int d = static_cast<int>(a.size());
    return std::pow(kTwoPi * v, -0.5 * d) * std::exp(-(a - b).squaredNorm() / (2.0 * v));
}

double kernel_eval_rows(const KernelSpec& spec, const Eigen::MatrixXd& a,
                        Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
    const int d = spec.dim;
    switch (spec.family) {
        case KernelFamily::Gaussian: {
            double sq = 0.0;
            for (int l = 0; l < d; ++l) {
                const double diff = a(i, l) - b(j, l);
                sq += diff * diff;
            }
            return gauss_value(sq, spec.sigma, d);
        }
        case KernelFamily::Box: {
            for (int l = 0; l < d; ++l)
                if (std::abs(a(i, l) - b(j, l)) > spec.sigma) return 0.0;
            return spec.sup_bound();
        }
    }
    throw std::logic_error("unknown kernel family");
}

double cross_integral_rows(const KernelSpec& spec, const Eigen::MatrixXd& a,
                           Eigen::Index i, const Eigen::MatrixXd& b, Eigen::Index j) {
    const int d = spec.dim;
    switch (spec.family) {
        case KernelFamily::Gaussian: {
            double sq = 0.0;
            for (int l = 0; l < d; ++l) {
                const double diff = a(i, l) - b(j, l);
                sq += diff * diff;
            }
            return gauss_value(sq, std::numbers::sqrt2 * spec.sigma, d);
        }
        case KernelFamily::Box: {
            const double w = 2.0 * spec.sigma;
            double overlap = 1.0;
            for (int l = 0; l < d; ++l)
                overlap *= std::max(0.0, w - std::abs(a(i, l) - b(j, l)));
            return overlap / std::pow(w, 2.0 * d);
        }
    }
    throw std::logic_error("unknown kernel family");
}

Eigen::MatrixXd gram_matrix_serial(const KernelSpec& spec,
                                   const Eigen::MatrixXd& centers) {
    spec.validate();
    if (centers.rows() < 1) throw std::invalid_argument("gram_matrix: empty center list");
    if (centers.cols() != spec.dim)
        throw std::invalid_argument("gram_matrix: center dimension does not match spec.dim");
    const Eigen::Index n = centers.rows();
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = cross_integral_rows(spec, centers, i, centers, j);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Eigen::MatrixXd& centers) {
    spec.validate();
    if (centers.rows() < 1) throw std::invalid_argument("gram_matrix: empty center list");
    if (centers.cols() != spec.dim)
        throw std::invalid_argument("gram_matrix: center dimension does not match spec.dim");
    const Eigen::Index n = centers.rows();
    Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(dynamic, 16)
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = cross_integral_rows(spec, centers, i, centers, j);
            g(i, j) = v;
            g(j, i) = v;
        }
    return g;
}

}  // namespace fbkde
