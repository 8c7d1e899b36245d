#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbkde/evaluation.hpp"
#include "fbkde/synthetic.hpp"
#include "fbkde/tuning.hpp"

namespace fbkde {

enum class TuningMethod { RuleOfThumb, CrossValidation };

/// One benchmark cell: a density, an estimator, a tuning method and a seed.
struct CellSpec {
    MixtureDensity density;
    EstimatorKind method = EstimatorKind::Fbkde;
    TuningMethod tuning = TuningMethod::RuleOfThumb;
    int n_train = 800;
    int n_test = 200;   // the 4/5 : 1/5 split of the drawn sample
    std::uint64_t seed = 0;
    int cv_draws = 100;
    int grid_points = 2001;
    double grid_pad = 4.0;  // grid = standardized data range +- pad
};

struct CellResult {
    EvalReport report;
    FitConfig config;            // resolved hyperparameters, standardized units
    WeightedDensity density;     // fitted estimator, standardized coordinates
    Standardizer standardizer;
    bool negative_weight = false;
    bool failed = false;
    std::string error;
};

/// Draw n_train + n_test points, standardize on the training part, tune, fit,
/// and evaluate J^T plus (for 1-D densities) sup-norm error and ISE against
/// the ground truth expressed in standardized coordinates.
CellResult run_cell(const CellSpec& spec);

struct Aggregate {
    double j_mean = 0.0, j_std = 0.0;
    double sup_mean = 0.0, sup_std = 0.0;
    double ise_mean = 0.0, ise_std = 0.0;
    int repeats = 0;
    int failures = 0;
};

/// Mean +- sample std over seeded repetitions; failed cells are counted and
/// excluded from the moments.
Aggregate aggregate_cells(const std::vector<CellResult>& cells);

/// Run `repeats` seeded repetitions of a cell, seeds derived from the master
/// seed and the repetition index.
std::vector<CellResult> repeat_cell(CellSpec spec, int repeats, std::uint64_t master_seed);

}  // namespace fbkde
