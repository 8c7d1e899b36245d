#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fbkde/estimator.hpp"
#include "fbkde/rng.hpp"
#include "fbkde/synthetic.hpp"

using namespace fbkde;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

template <typename F>
double simpson(F g, double lo, double hi, int intervals) {
    const double h = (hi - lo) / intervals;
    double acc = g(lo) + g(hi);
    for (int i = 1; i < intervals; ++i) acc += g(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("standardizer round-trips and produces unit moments") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 500, 5);
    const Standardizer st = Standardizer::fit(data);
    const Eigen::MatrixXd z = st.apply(data);
    const double mean = z.col(0).mean();
    const double var = (z.col(0).array() - mean).square().sum() / (z.rows() - 1);
    CHECK(std::abs(mean) < 1e-12);
    CHECK(var == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((st.invert(z) - data).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::MatrixXd constant = Eigen::MatrixXd::Ones(10, 1);
    CHECK_THROWS_AS(Standardizer::fit(constant), std::invalid_argument);
}

TEST_CASE("jitter is deterministic with the right scale") {
    const Eigen::MatrixXd data = sample(MixtureDensity::single_gaussian(), 4000, 9);
    const Eigen::MatrixXd a = jitter_centers(data, 0.05, 123);
    const Eigen::MatrixXd b = jitter_centers(data, 0.05, 123);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
    CHECK((jitter_centers(data, 0.0, 123) - data).cwiseAbs().maxCoeff() == 0.0);

    const Eigen::ArrayXd noise = (a - data).col(0).array();
    const double sd = std::sqrt(noise.square().sum() / (noise.size() - 1));
    CHECK(sd == doctest::Approx(0.05).epsilon(0.05));
    CHECK(std::abs(noise.mean()) < 0.005);
}

TEST_CASE("loo_h matches the naive double loop") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 60, 17);
    const Eigen::MatrixXd centers = jitter_centers(data, 0.03, 18);
    const KernelSpec spec{KernelFamily::Gaussian, 0.4, 1};
    const Eigen::VectorXd h = loo_h(spec, data, centers);
    REQUIRE(h.size() == 60);
    for (int i = 0; i < 60; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 60; ++j) {
            if (j == i) continue;
            const Eigen::VectorXd xj = data.row(j), zi = centers.row(i);
            acc += kernel_eval(spec, xj, zi);
        }
        CHECK(h[i] == doctest::Approx(acc / 59.0).epsilon(1e-13));
    }
}

TEST_CASE("fbKDE fit is feasible, deterministic, and symmetric under symmetry") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 150, 23);
    FitConfig cfg;
    cfg.sigma = 0.35;
    cfg.radius = 2.0;
    cfg.sigma_gamma = 0.02;
    cfg.seed = 77;
    const FbkdeFit fit1 = fit_fbkde(data, cfg);
    const FbkdeFit fit2 = fit_fbkde(data, cfg);
    CHECK(fit1.solution.converged);
    CHECK(fit1.density.weights.lpNorm<1>() <= cfg.radius + 1e-9);
    CHECK((fit1.density.weights - fit2.density.weights).cwiseAbs().maxCoeff() == 0.0);
    CHECK((fit1.density.centers - fit2.density.centers).cwiseAbs().maxCoeff() == 0.0);

    // Two points, no jitter: by symmetry both weights are equal.
    Eigen::MatrixXd two(2, 1);
    two << -0.5, 0.5;
    FitConfig sym;
    sym.sigma = 0.5;
    sym.radius = 1.0;
    sym.sigma_gamma = 0.0;
    const FbkdeFit symfit = fit_fbkde(two, sym);
    CHECK(symfit.density.weights[0] ==
          doctest::Approx(symfit.density.weights[1]).epsilon(1e-6));
}

TEST_CASE("tiny radius forces tiny weights") {
    const Eigen::MatrixXd data = sample(MixtureDensity::single_gaussian(), 50, 31);
    FitConfig cfg;
    cfg.sigma = 0.4;
    cfg.radius = 1e-6;
    cfg.sigma_gamma = 0.0;
    const FbkdeFit fit = fit_fbkde(data, cfg);
    CHECK(fit.density.weights.lpNorm<1>() <= 1e-6 + 1e-12);
}

TEST_CASE("fbKDE training objective never loses to uniform weights when R >= 1") {
    const Eigen::MatrixXd data = sample(MixtureDensity::trimodal(), 120, 41);
    FitConfig cfg;
    cfg.sigma = 0.3;
    cfg.radius = 1.5;
    cfg.sigma_gamma = 0.01;
    cfg.seed = 5;
    const FbkdeFit fit = fit_fbkde(data, cfg);
    CHECK(fit.solution.converged);

    const KernelSpec spec = fit.density.kernel;
    QpProblem p{gram_matrix(spec, fit.density.centers),
                loo_h(spec, data, fit.density.centers), cfg.radius};
    const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(120, 1.0 / 120.0);
    CHECK(qp_objective(p, fit.density.weights) <= qp_objective(p, uniform) + 1e-5);
}

TEST_CASE("KDE has uniform weights and unit mass") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 200, 51);
    const WeightedDensity kde = fit_kde(data, 0.3);
    CHECK(kde.weights.size() == 200);
    for (int i = 0; i < 200; ++i) CHECK(kde.weights[i] == doctest::Approx(1.0 / 200).epsilon(1e-15));
    const double mass = simpson([&](double t) { return density_eval(kde, vec1(t)); },
                                -8.0, 8.0, 8000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("vKDE bandwidths satisfy the geometric-mean identity") {
    const Eigen::MatrixXd data = sample(MixtureDensity::kurtotic(), 150, 61);
    const double sigma = 0.35;
    const WeightedDensity v = fit_vkde(data, sigma);
    REQUIRE(v.per_center_sigma.has_value());
    const Eigen::VectorXd& s = *v.per_center_sigma;
    REQUIRE(s.size() == 150);
    CHECK(s.minCoeff() > 0.0);

    // sigma_i = sigma sqrt(lambda) f(X_i)^{-1/2}, lambda = geomean(f(X_i)), so
    // geomean(sigma_i) = sigma: sum log sigma_i = n log sigma.
    double logsum = 0.0;
    for (int i = 0; i < 150; ++i) logsum += std::log(s[i]);
    CHECK(logsum == doctest::Approx(150 * std::log(sigma)).epsilon(1e-10));

    // Wider bandwidths in the tails than at the dense center.
    const WeightedDensity pilot = fit_kde(data, sigma);
    Eigen::Index dense, sparse;
    Eigen::VectorXd pv = density_eval_grid(pilot, data);
    pv.maxCoeff(&dense);
    pv.minCoeff(&sparse);
    CHECK(s[sparse] > s[dense]);

    const double mass = simpson([&](double t) { return density_eval(v, vec1(t)); },
                                -12.0, 12.0, 12000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("density_eval matches the naive weighted sum") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 40, 71);
    FitConfig cfg;
    cfg.sigma = 0.45;
    cfg.radius = 1.2;
    cfg.sigma_gamma = 0.02;
    cfg.seed = 3;
    const FbkdeFit fit = fit_fbkde(data, cfg);
    const WeightedDensity& est = fit.density;
    for (double x : {-1.4, -0.3, 0.6, 2.2}) {
        double naive = 0.0;
        for (int i = 0; i < 40; ++i) {
            const Eigen::VectorXd c = est.centers.row(i);
            naive += est.weights[i] * kernel_eval(est.kernel, vec1(x), c);
        }
        CHECK(density_eval(est, vec1(x)) == doctest::Approx(naive).epsilon(1e-13));
    }
}

TEST_CASE("density_gram honors per-center bandwidths") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 30, 81);
    const WeightedDensity v = fit_vkde(data, 0.4);
    const Eigen::MatrixXd G = density_gram(v);
    REQUIRE(G.rows() == 30);
    const Eigen::VectorXd& s = *v.per_center_sigma;
    for (int i = 0; i < 30; ++i)
        for (int j = i; j < 30; ++j) {
            const Eigen::VectorXd a = v.centers.row(i), b = v.centers.row(j);
            CHECK(G(i, j) == doctest::Approx(gaussian_cross_integral(a, b, s[i], s[j]))
                                 .epsilon(1e-13));
            CHECK(G(i, j) == G(j, i));
        }

    // Shared-bandwidth estimators reduce to the plain Gram matrix.
    const WeightedDensity kde = fit_kde(data, 0.4);
    const Eigen::MatrixXd Gk = density_gram(kde);
    const Eigen::MatrixXd want = gram_matrix(kde.kernel, kde.centers);
    CHECK((Gk - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("weighted density validation") {
    WeightedDensity bad;
    bad.kernel = KernelSpec{KernelFamily::Gaussian, 0.3, 1};
    bad.centers = Eigen::MatrixXd::Zero(3, 1);
    bad.weights = Eigen::VectorXd::Zero(2);  // length mismatch
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
