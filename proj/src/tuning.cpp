#include "fbkde/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fbkde/evaluation.hpp"
#include "fbkde/rng.hpp"

namespace fbkde {

double silverman_sigma(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    const Eigen::Index d = data.cols();
    if (n < 2) throw std::invalid_argument("silverman_sigma: need n >= 2");
    double pooled = 0.0;
    for (Eigen::Index l = 0; l < d; ++l) {
        const double mean = data.col(l).mean();
        const double var =
            (data.col(l).array() - mean).square().sum() / static_cast<double>(n - 1);
        pooled += std::sqrt(var);
    }
    pooled /= static_cast<double>(d);
    return pooled * std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
}

double radius_rule(int n, int d) {
    if (n <= 2) throw std::invalid_argument("radius_rule: need n >= 3");
    if (d < 1) throw std::invalid_argument("radius_rule: d must be >= 1");
    const double base = n / std::log(static_cast<double>(n));
    const double exponent = d <= 4 ? 1.0 / 3.0 : 0.5 - 2.0 / d;
    return std::pow(base, exponent);
}

double gamma_rule(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    if (n < 6) throw std::invalid_argument("gamma_rule: need n >= 6 for a 5th neighbor");
    std::vector<double> fifth(n);
#pragma omp parallel for schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<double> dists;
        dists.reserve(n - 1);
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            dists.push_back((data.row(i) - data.row(j)).norm());
        }
        std::nth_element(dists.begin(), dists.begin() + 4, dists.end());
        fifth[i] = dists[4];
    }
    std::sort(fifth.begin(), fifth.end());
    const std::size_t mid = fifth.size() / 2;
    return fifth.size() % 2 == 1 ? fifth[mid] : 0.5 * (fifth[mid - 1] + fifth[mid]);
}

ParamBox theta_box(int n, int d) {
    if (n < 2) throw std::invalid_argument("theta_box: need n >= 2");
    if (d < 1) throw std::invalid_argument("theta_box: d must be >= 1");
    ParamBox box;
    box.gamma_range = {0.001, 0.1};
    if (d <= 4) {
        box.sigma_range = {0.1, 0.5};
        box.radius_range = {1.1, 2.0 * std::sqrt(static_cast<double>(n))};
    } else {
        box.sigma_range = {0.1, 1.0};
        box.radius_range = {1.1, 2.0 * std::pow(static_cast<double>(n), 0.5 - 2.0 / d)};
    }
    return box;
}

int cv_folds_for(int n) { return n > 1000 ? 2 : 3; }

FitConfig sample_config(const ParamBox& box, std::uint64_t seed) {
    Rng rng(seed);
    auto log_uniform = [&rng](std::pair<double, double> range) {
        std::uniform_real_distribution<double> unif(std::log(range.first),
                                                    std::log(range.second));
        return std::exp(unif(rng));
    };
    FitConfig config;
    config.sigma = log_uniform(box.sigma_range);
    config.radius = log_uniform(box.radius_range);
    config.sigma_gamma = log_uniform(box.gamma_range);
    return config;
}

CvResult cross_validate(const Eigen::MatrixXd& data, const CvPlan& plan,
                        EstimatorKind kind) {
    const Eigen::Index n = data.rows();
    if (plan.folds < 2) throw std::invalid_argument("cross_validate: folds must be >= 2");
    if (plan.draws < 1) throw std::invalid_argument("cross_validate: draws must be >= 1");
    if (n < plan.folds) throw std::invalid_argument("cross_validate: n < folds");

    // Seeded random partition into V near-equal folds.
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng shuffle_rng(derive_seed(plan.seed, 0xf01d));
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    std::vector<int> fold_of(n);
    for (Eigen::Index i = 0; i < n; ++i)
        fold_of[order[i]] = static_cast<int>(i % plan.folds);

    const ParamBox box = theta_box(static_cast<int>(n), static_cast<int>(data.cols()));

    CvResult result;
    result.table.reserve(plan.draws);
    for (int t = 0; t < plan.draws; ++t) {
        CvEntry entry;
        entry.config = sample_config(box, derive_seed(plan.seed, 0xd0aa, t));
        entry.fold_scores.reserve(plan.folds);

        for (int v = 0; v < plan.folds; ++v) {
            Eigen::Index n_train = 0, n_val = 0;
            for (Eigen::Index i = 0; i < n; ++i) (fold_of[i] == v ? n_val : n_train)++;
            if (n_train < 2)
                throw std::invalid_argument("cross_validate: fold with < 2 training points");
            Eigen::MatrixXd train(n_train, data.cols()), val(n_val, data.cols());
            Eigen::Index it = 0, iv = 0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (fold_of[i] == v)
                    val.row(iv++) = data.row(i);
                else
                    train.row(it++) = data.row(i);
            }

            WeightedDensity density;
            switch (kind) {
                case EstimatorKind::Fbkde: {
                    FitConfig config = entry.config;
                    config.seed = derive_seed(plan.seed, 0xf17, t, v);
                    density = fit_fbkde(train, config).density;
                    break;
                }
                case EstimatorKind::Kde:
                    density = fit_kde(train, entry.config.sigma);
                    break;
                case EstimatorKind::Vkde:
                    density = fit_vkde(train, entry.config.sigma);
                    break;
            }
            entry.fold_scores.push_back(j_test(density, val));
        }
        entry.mean_score =
            std::accumulate(entry.fold_scores.begin(), entry.fold_scores.end(), 0.0) /
            static_cast<double>(plan.folds);
        result.table.push_back(std::move(entry));
    }

    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < result.table.size(); ++t) {
        if (result.table[t].mean_score < best_score) {
            best_score = result.table[t].mean_score;
            result.best_index = t;
        }
    }
    result.best = result.table[result.best_index].config;
    return result;
}

}  // namespace fbkde
