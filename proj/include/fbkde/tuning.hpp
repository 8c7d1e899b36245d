#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "fbkde/estimator.hpp"

namespace fbkde {

/// Log-spaced search ranges for (sigma, R_n, sigma_gamma).
struct ParamBox {
    std::pair<double, double> sigma_range;
    std::pair<double, double> radius_range;
    std::pair<double, double> gamma_range;
};

struct CvPlan {
    int folds = 3;    // 2 for n > 1000, 3 otherwise
    int draws = 100;  // random parameter combinations
    std::uint64_t seed = 0;
};

enum class EstimatorKind { Fbkde, Kde, Vkde };

/// Normal-reference bandwidth: sigma_pooled * (4 / ((d+2) n))^(1/(d+4)),
/// sigma_pooled the mean of per-dimension sample standard deviations.
double silverman_sigma(const Eigen::MatrixXd& data);

/// (n/log n)^(1/3) for d <= 4, (n/log n)^(1/2 - 2/d) for d > 4.
double radius_rule(int n, int d);

/// Median Euclidean distance to the 5th nearest neighbor (self excluded).
double gamma_rule(const Eigen::MatrixXd& data);

/// The random-search box Theta_d; ranges ordered (sigma, R_n, sigma_gamma).
ParamBox theta_box(int n, int d);

/// V = 2 for n > 1000, V = 3 otherwise.
int cv_folds_for(int n);

/// One log-uniform draw from the box. Deterministic given the seed.
FitConfig sample_config(const ParamBox& box, std::uint64_t seed);

struct CvEntry {
    FitConfig config;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct CvResult {
    FitConfig best;
    std::size_t best_index = 0;
    std::vector<CvEntry> table;
};

/// Random-search V-fold cross-validation. For the fbKDE all three parameters
/// are drawn; for the KDE/vKDE only sigma is drawn (radius and jitter unused).
/// Validation score is the held-out criterion J^T on the fold. The winner is
/// the smallest mean score, ties broken by smallest draw index.
CvResult cross_validate(const Eigen::MatrixXd& data, const CvPlan& plan,
                        EstimatorKind kind);

}  // namespace fbkde
