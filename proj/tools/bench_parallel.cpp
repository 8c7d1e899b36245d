// Timing comparison of the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "fbkde/estimator.hpp"
#include "fbkde/kernels.hpp"
#include "fbkde/synthetic.hpp"

using namespace fbkde;

namespace {

template <typename Fn>
double time_ms(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

}  // namespace

int main() {
    const int n = 3000;
    const int grid_n = 20000;
    const MixtureDensity density = MixtureDensity::bimodal();
    const Eigen::MatrixXd data = sample(density, n, 42);
    const KernelSpec kernel{KernelFamily::Gaussian, 0.3, 1};

    std::printf("threads: %d, n = %d, grid = %d\n", omp_get_max_threads(), n, grid_n);

    Eigen::MatrixXd g_serial, g_parallel;
    const double t_gram_s = time_ms([&] { g_serial = gram_matrix_serial(kernel, data); });
    const double t_gram_p = time_ms([&] { g_parallel = gram_matrix(kernel, data); });
    std::printf("gram_matrix      serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   max|diff| %.3g\n",
                t_gram_s, t_gram_p, t_gram_s / t_gram_p,
                (g_serial - g_parallel).cwiseAbs().maxCoeff());

    Eigen::VectorXd h_serial, h_parallel;
    const double t_loo_s = time_ms([&] { h_serial = loo_h_serial(kernel, data, data); });
    const double t_loo_p = time_ms([&] { h_parallel = loo_h(kernel, data, data); });
    std::printf("loo_h            serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   max|diff| %.3g\n",
                t_loo_s, t_loo_p, t_loo_s / t_loo_p,
                (h_serial - h_parallel).cwiseAbs().maxCoeff());

    const WeightedDensity kde = fit_kde(data, 0.3);
    Eigen::MatrixXd grid(grid_n, 1);
    grid.col(0) = Eigen::VectorXd::LinSpaced(grid_n, -5.0, 5.0);
    Eigen::VectorXd e_serial, e_parallel;
    const double t_eval_s = time_ms([&] { e_serial = density_eval_grid_serial(kde, grid); });
    const double t_eval_p = time_ms([&] { e_parallel = density_eval_grid(kde, grid); });
    std::printf("density_eval     serial %8.1f ms   parallel %8.1f ms   speedup %.2fx   max|diff| %.3g\n",
                t_eval_s, t_eval_p, t_eval_s / t_eval_p,
                (e_serial - e_parallel).cwiseAbs().maxCoeff());
    return 0;
}
