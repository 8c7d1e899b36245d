#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "fbkde/evaluation.hpp"
#include "fbkde/rng.hpp"
#include "fbkde/synthetic.hpp"

using namespace fbkde;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v << x;
    return v;
}

}  // namespace

TEST_CASE("eval_grid_1d endpoints and spacing") {
    const Eigen::MatrixXd g = eval_grid_1d(-2.0, 3.0, 11);
    REQUIRE(g.rows() == 11);
    REQUIRE(g.cols() == 1);
    CHECK(g(0, 0) == doctest::Approx(-2.0));
    CHECK(g(10, 0) == doctest::Approx(3.0));
    CHECK(g(1, 0) - g(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("j_test is zero for zero weights and matches the naive formula") {
    const Eigen::MatrixXd data = sample(MixtureDensity::bimodal(), 50, 5);
    const Eigen::MatrixXd test = sample(MixtureDensity::bimodal(), 40, 6);

    WeightedDensity zero = fit_kde(data, 0.4);
    zero.weights.setZero();
    CHECK(j_test(zero, test) == 0.0);

    const WeightedDensity kde = fit_kde(data, 0.4);
    const Eigen::MatrixXd G = density_gram(kde);
    double quad = kde.weights.dot(G * kde.weights);
    double cross = 0.0;
    for (int i = 0; i < 50; ++i) {
        double mean_k = 0.0;
        for (int l = 0; l < 40; ++l) {
            const Eigen::VectorXd xl = test.row(l), zi = kde.centers.row(i);
            mean_k += kernel_eval(kde.kernel, xl, zi);
        }
        cross += kde.weights[i] * mean_k / 40.0;
    }
    CHECK(j_test(kde, test) == doctest::Approx(quad - 2.0 * cross).epsilon(1e-12));
}

TEST_CASE("j_test of a good fit approaches -integral of f^2") {
    // E[J^T] = ||f_est||^2 - 2 E f_est(X) -> -||f||^2 as the fit improves.
    const MixtureDensity d = MixtureDensity::single_gaussian();
    const Eigen::MatrixXd train = sample(d, 4000, 11);
    const Eigen::MatrixXd test = sample(d, 4000, 12);
    const WeightedDensity kde = fit_kde(train, 0.25);
    // ||f||^2 for N(0,1) is 1/(2 sqrt(pi)).
    const double norm_f2 = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
    CHECK(j_test(kde, test) == doctest::Approx(-norm_f2).epsilon(0.05));
}

TEST_CASE("sup_error detects a known offset") {
    const MixtureDensity d = MixtureDensity::single_gaussian();
    // Estimator = the true density as a single kernel bump at the origin.
    WeightedDensity est;
    est.kernel = KernelSpec{KernelFamily::Gaussian, 1.0, 1};
    est.centers = Eigen::MatrixXd::Zero(1, 1);
    est.weights = Eigen::VectorXd::Ones(1);
    const Eigen::MatrixXd grid = eval_grid_1d(-5.0, 5.0, 2001);
    CHECK(sup_error(est, d, grid) == doctest::Approx(0.0).epsilon(1e-12));

    est.weights[0] = 0.9;  // 10% deficit peaks at the mode
    const double peak = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    CHECK(sup_error(est, d, grid) == doctest::Approx(0.1 * peak).epsilon(1e-6));
}

TEST_CASE("ise matches a closed form") {
    // Same setup: ISE of (1 - w) * phi is (1 - w)^2 ||phi||^2.
    const MixtureDensity d = MixtureDensity::single_gaussian();
    WeightedDensity est;
    est.kernel = KernelSpec{KernelFamily::Gaussian, 1.0, 1};
    est.centers = Eigen::MatrixXd::Zero(1, 1);
    est.weights = Eigen::VectorXd::Constant(1, 0.8);
    const double norm_f2 = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
    CHECK(ise(est, d, -10.0, 10.0) == doctest::Approx(0.04 * norm_f2).epsilon(1e-8));
    CHECK_THROWS_AS(ise(est, d, -1.0, 1.0, 3), std::invalid_argument);  // odd intervals
}

TEST_CASE("hoeffding bound frozen value and monotonicity") {
    // eps = sqrt(8 C^2 R^2 log(2n/delta) / (n-1)); n=2000, R=1, C=1, delta=0.05:
    // log(80000) = 11.2898..., eps = sqrt(8 * 11.28978... / 1999) = 0.2125253...
    const double eps = hoeffding_bound(2000, 1.0, 1.0, 0.05);
    CHECK(eps == doctest::Approx(std::sqrt(8.0 * std::log(80000.0) / 1999.0)).epsilon(1e-14));
    CHECK(eps == doctest::Approx(0.21252).epsilon(1e-4));

    CHECK(hoeffding_bound(4000, 1.0, 1.0, 0.05) < eps);        // shrinks with n
    CHECK(hoeffding_bound(2000, 2.0, 1.0, 0.05) == doctest::Approx(2.0 * eps).epsilon(1e-13));
    CHECK(hoeffding_bound(2000, 1.0, 3.0, 0.05) == doctest::Approx(3.0 * eps).epsilon(1e-13));
    CHECK(hoeffding_bound(2000, 1.0, 1.0, 0.01) > eps);        // tighter level, wider bound
    CHECK_THROWS_AS(hoeffding_bound(1, 1.0, 1.0, 0.05), std::invalid_argument);
}

TEST_CASE("round-trip: the bound inverts the concentration level") {
    const int n = 500;
    const double R = 2.0, C = 1.3, delta = 0.07;
    const double eps = hoeffding_bound(n, R, C, delta);
    const double back = 2.0 * n * std::exp(-(n - 1) * eps * eps / (8.0 * C * C * R * R));
    CHECK(back == doctest::Approx(delta).epsilon(1e-12));
}
