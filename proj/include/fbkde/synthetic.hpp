#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "fbkde/kernels.hpp"

namespace fbkde {

struct GaussComponent {
    double weight;         // in (0, 1]; weights sum to 1
    Eigen::VectorXd mean;
    double stddev;         // isotropic
};

/// Ground-truth density: either a Gaussian mixture in R^d or the triangular
/// density on [a, b] with mode c (d = 1 only).
struct MixtureDensity {
    std::vector<GaussComponent> components;
    bool triangular = false;
    double tri_a = 0.0, tri_c = 0.0, tri_b = 0.0;

    int dim() const;
    void validate() const;

    static MixtureDensity gaussian_mixture(std::vector<GaussComponent> comps);
    static MixtureDensity make_triangular(double a, double c, double b);

    // Canonical 1-D benchmark densities.
    static MixtureDensity single_gaussian(double mean = 0.0, double stddev = 1.0);
    static MixtureDensity bimodal();     // 0.5 N(-1, 0.5^2) + 0.5 N(1, 0.1^2)
    static MixtureDensity trimodal();    // 0.45 N(-1.2, .4^2) + 0.45 N(1.2, .4^2) + 0.1 N(0, .15^2)
    static MixtureDensity kurtotic();    // (2/3) N(0, 1) + (1/3) N(0, 0.1^2)
    static MixtureDensity triangle();    // triangular(-1, 0, 1)

    /// Lookup by name: bimodal | trimodal | kurtotic | triangular | gaussian.
    static MixtureDensity by_name(const std::string& name);

    /// The same density expressed in standardized coordinates u = (x - mean)/scale
    /// (d = 1 only): component means and widths rescaled, mass preserved.
    MixtureDensity standardized(double mean, double scale) const;
};

/// iid sample, n x d matrix; deterministic given seed.
Eigen::MatrixXd sample(const MixtureDensity& density, int n, std::uint64_t seed);

double pdf(const MixtureDensity& density, const Eigen::VectorXd& x);

/// Closed-form h(z) = integral of k(x, z) f(x) dx for a Gaussian mixture f and
/// Gaussian kernel k: sum_m w_m N(z; mu_m, (sigma^2 + s_m^2) I).
double convolved_h(const MixtureDensity& density, const KernelSpec& kernel,
                   const Eigen::VectorXd& z);

}  // namespace fbkde
