#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace fbkde::cli {

/// Resolved parameters for one CLI invocation. Flags and config-file keys map
/// onto these fields one-to-one.
struct RunConfig {
    std::string density;          // synthetic density name; empty when csv is used
    std::string csv;              // input CSV path
    int n = 800;                  // training size (synthetic sources)
    int n_test = 0;               // 0 = n/4, the 4/5 : 1/5 split
    std::uint64_t seed = 0;
    std::string method = "fbkde"; // fbkde | kde | vkde | box
    std::string tuning = "rot";   // rot | cv | both (bench only)
    std::string out;              // output path
    std::string model;            // fitted-model JSON (eval)
    int repeats = 20;
    double sigma = 0.0;           // explicit overrides; <= 0 means "use tuning"
    double radius = 0.0;
    double gamma = -1.0;          // < 0 means "use tuning"
    int box_q = 2;                // box-grid resolution, sigma = 1/(2q)
    int box_m = 4;
    int cv_draws = 100;
    int grid_points = 2001;
    double grid_pad = 4.0;
    std::vector<int> sweep_sizes = {50, 250, 450, 1050, 1650, 1850, 2050};
};

/// Read a CSV file: header row, then one numeric row per sample. Malformed
/// cells or ragged rows raise std::runtime_error naming the row.
Eigen::MatrixXd read_csv(const std::string& path);

int cmd_fit(const RunConfig& config);
int cmd_eval(const RunConfig& config);
int cmd_bench(const RunConfig& config);
int cmd_sweep(const RunConfig& config);
int cmd_plotdata(const RunConfig& config);

}  // namespace fbkde::cli
