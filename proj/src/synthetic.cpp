#include "fbkde/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fbkde/rng.hpp"

namespace fbkde {

namespace {

double normal_pdf(double sqdist, double stddev, int d) {
    const double v = stddev * stddev;
    return std::pow(2.0 * std::numbers::pi * v, -0.5 * d) * std::exp(-sqdist / (2.0 * v));
}

}  // namespace

int MixtureDensity::dim() const {
    if (triangular) return 1;
    return components.empty() ? 0 : static_cast<int>(components.front().mean.size());
}

void MixtureDensity::validate() const {
    if (triangular) {
        if (!(tri_a < tri_c && tri_c < tri_b))
            throw std::invalid_argument("MixtureDensity: triangular requires a < c < b");
        return;
    }
    if (components.empty())
        throw std::invalid_argument("MixtureDensity: no components");
    double total = 0.0;
    const Eigen::Index d = components.front().mean.size();
    for (const auto& c : components) {
        if (!(c.weight > 0.0))
            throw std::invalid_argument("MixtureDensity: component weights must be positive");
        if (!(c.stddev > 0.0))
            throw std::invalid_argument("MixtureDensity: component stddevs must be positive");
        if (c.mean.size() != d)
            throw std::invalid_argument("MixtureDensity: inconsistent component dimensions");
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("MixtureDensity: weights must sum to 1");
}

MixtureDensity MixtureDensity::gaussian_mixture(std::vector<GaussComponent> comps) {
    MixtureDensity m;
    m.components = std::move(comps);
    m.validate();
    return m;
}

MixtureDensity MixtureDensity::make_triangular(double a, double c, double b) {
    MixtureDensity m;
    m.triangular = true;
    m.tri_a = a;
    m.tri_c = c;
    m.tri_b = b;
    m.validate();
    return m;
}

MixtureDensity MixtureDensity::single_gaussian(double mean, double stddev) {
    Eigen::VectorXd mu(1);
    mu << mean;
    return gaussian_mixture({{1.0, mu, stddev}});
}

MixtureDensity MixtureDensity::bimodal() {
    Eigen::VectorXd m1(1), m2(1);
    m1 << -1.0;
    m2 << 1.0;
    return gaussian_mixture({{0.5, m1, 0.5}, {0.5, m2, 0.1}});
}

MixtureDensity MixtureDensity::trimodal() {
    Eigen::VectorXd m1(1), m2(1), m3(1);
    m1 << -1.2;
    m2 << 1.2;
    m3 << 0.0;
    return gaussian_mixture({{0.45, m1, 0.4}, {0.45, m2, 0.4}, {0.1, m3, 0.15}});
}

MixtureDensity MixtureDensity::kurtotic() {
    Eigen::VectorXd m(1);
    m << 0.0;
    return gaussian_mixture({{2.0 / 3.0, m, 1.0}, {1.0 / 3.0, m, 0.1}});
}

MixtureDensity MixtureDensity::triangle() { return make_triangular(-1.0, 0.0, 1.0); }

MixtureDensity MixtureDensity::by_name(const std::string& name) {
    if (name == "bimodal") return bimodal();
    if (name == "trimodal") return trimodal();
    if (name == "kurtotic") return kurtotic();
    if (name == "triangular") return triangle();
    if (name == "gaussian") return single_gaussian();
    throw std::invalid_argument("unknown density name: " + name);
}

MixtureDensity MixtureDensity::standardized(double mean, double scale) const {
    validate();
    if (dim() != 1)
        throw std::invalid_argument("MixtureDensity::standardized: d = 1 only");
    if (!(scale > 0.0))
        throw std::invalid_argument("MixtureDensity::standardized: scale must be positive");
    if (triangular)
        return make_triangular((tri_a - mean) / scale, (tri_c - mean) / scale,
                               (tri_b - mean) / scale);
    MixtureDensity out;
    for (const auto& c : components) {
        Eigen::VectorXd mu(1);
        mu << (c.mean[0] - mean) / scale;
        out.components.push_back({c.weight, mu, c.stddev / scale});
    }
    return out;
}

Eigen::MatrixXd sample(const MixtureDensity& density, int n, std::uint64_t seed) {
    density.validate();
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
    Rng rng(seed);

    if (density.triangular) {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        const double a = density.tri_a, c = density.tri_c, b = density.tri_b;
        const double fc = (c - a) / (b - a);
        Eigen::MatrixXd out(n, 1);
        for (int i = 0; i < n; ++i) {
            const double u = unif(rng);
            out(i, 0) = u < fc ? a + std::sqrt(u * (b - a) * (c - a))
                               : b - std::sqrt((1.0 - u) * (b - a) * (b - c));
        }
        return out;
    }

    const int d = density.dim();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd out(n, d);
    for (int i = 0; i < n; ++i) {
        double u = unif(rng);
        std::size_t pick = 0;
        for (; pick + 1 < density.components.size(); ++pick) {
            u -= density.components[pick].weight;
            if (u < 0.0) break;
        }
        const auto& comp = density.components[pick];
        for (int l = 0; l < d; ++l)
            out(i, l) = comp.mean[l] + comp.stddev * gauss(rng);
    }
    return out;
}

double pdf(const MixtureDensity& density, const Eigen::VectorXd& x) {
    density.validate();
    if (x.size() != density.dim())
        throw std::invalid_argument("pdf: dimension mismatch");
    if (density.triangular) {
        const double t = x[0];
        const double a = density.tri_a, c = density.tri_c, b = density.tri_b;
        if (t < a || t > b) return 0.0;
        if (t <= c) return 2.0 * (t - a) / ((b - a) * (c - a));
        return 2.0 * (b - t) / ((b - a) * (b - c));
    }
    double value = 0.0;
    for (const auto& comp : density.components)
        value += comp.weight *
                 normal_pdf((x - comp.mean).squaredNorm(), comp.stddev, density.dim());
    return value;
}

double convolved_h(const MixtureDensity& density, const KernelSpec& kernel,
                   const Eigen::VectorXd& z) {
    density.validate();
    kernel.validate();
    if (density.triangular || kernel.family != KernelFamily::Gaussian)
        throw std::invalid_argument("convolved_h: Gaussian mixture and Gaussian kernel only");
    if (z.size() != density.dim() || kernel.dim != density.dim())
        throw std::invalid_argument("convolved_h: dimension mismatch");
    double value = 0.0;
    for (const auto& comp : density.components) {
        const double v = std::sqrt(kernel.sigma * kernel.sigma + comp.stddev * comp.stddev);
        value += comp.weight * normal_pdf((z - comp.mean).squaredNorm(), v, density.dim());
    }
    return value;
}

}  // namespace fbkde
