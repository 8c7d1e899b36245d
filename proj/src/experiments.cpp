#include "fbkde/experiments.hpp"

#include <cmath>
#include <stdexcept>

#include "fbkde/rng.hpp"

namespace fbkde {

CellResult run_cell(const CellSpec& spec) {
    CellResult out;
    try {
        const int total = spec.n_train + spec.n_test;
        const Eigen::MatrixXd raw = sample(spec.density, total, spec.seed);
        const Eigen::MatrixXd raw_train = raw.topRows(spec.n_train);
        const Eigen::MatrixXd raw_test = raw.bottomRows(spec.n_test);

        out.standardizer = Standardizer::fit(raw_train);
        const Eigen::MatrixXd train = out.standardizer.apply(raw_train);
        const Eigen::MatrixXd test = out.standardizer.apply(raw_test);

        FitConfig config;
        config.seed = derive_seed(spec.seed, 0xf13);
        if (spec.tuning == TuningMethod::RuleOfThumb) {
            config.sigma = silverman_sigma(train);
            config.radius = radius_rule(spec.n_train, static_cast<int>(train.cols()));
            config.sigma_gamma = gamma_rule(train);
        } else {
            CvPlan plan;
            plan.folds = cv_folds_for(spec.n_train);
            plan.draws = spec.cv_draws;
            plan.seed = derive_seed(spec.seed, 0xc5);
            const CvResult cv = cross_validate(train, plan, spec.method);
            config.sigma = cv.best.sigma;
            config.radius = cv.best.radius;
            config.sigma_gamma = cv.best.sigma_gamma;
        }
        out.config = config;

        switch (spec.method) {
            case EstimatorKind::Fbkde: {
                FbkdeFit fit = fit_fbkde(train, config);
                out.density = fit.density;
                break;
            }
            case EstimatorKind::Kde:
                out.density = fit_kde(train, config.sigma);
                break;
            case EstimatorKind::Vkde:
                out.density = fit_vkde(train, config.sigma);
                break;
        }
        out.negative_weight = (out.density.weights.array() < 0.0).any();

        EvalReport report;
        report.n_train = spec.n_train;
        report.n_test = spec.n_test;
        report.j_test = j_test(out.density, test);
        report.hoeffding_bound = hoeffding_bound(
            spec.n_train, config.radius, out.density.kernel.sup_bound(), 0.05);

        if (spec.density.dim() == 1) {
            const MixtureDensity truth =
                spec.density.standardized(out.standardizer.mean[0], out.standardizer.stddev[0]);
            const double lo = train.col(0).minCoeff() - spec.grid_pad;
            const double hi = train.col(0).maxCoeff() + spec.grid_pad;
            const Eigen::MatrixXd grid = eval_grid_1d(lo, hi, spec.grid_points);
            report.sup_error = sup_error(out.density, truth, grid);
            report.ise = ise(out.density, truth, lo, hi);
        }
        out.report = report;
    } catch (const std::exception& e) {
        out.failed = true;
        out.error = e.what();
    }
    return out;
}

Aggregate aggregate_cells(const std::vector<CellResult>& cells) {
    Aggregate agg;
    std::vector<double> js, sups, ises;
    for (const auto& cell : cells) {
        if (cell.failed) {
            ++agg.failures;
            continue;
        }
        js.push_back(cell.report.j_test);
        if (cell.report.sup_error) sups.push_back(*cell.report.sup_error);
        if (cell.report.ise) ises.push_back(*cell.report.ise);
    }
    auto moments = [](const std::vector<double>& v, double& mean, double& stddev) {
        mean = 0.0;
        stddev = 0.0;
        if (v.empty()) return;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        if (v.size() < 2) return;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    };
    moments(js, agg.j_mean, agg.j_std);
    moments(sups, agg.sup_mean, agg.sup_std);
    moments(ises, agg.ise_mean, agg.ise_std);
    agg.repeats = static_cast<int>(cells.size());
    return agg;
}

std::vector<CellResult> repeat_cell(CellSpec spec, int repeats, std::uint64_t master_seed) {
    if (repeats < 1) throw std::invalid_argument("repeat_cell: repeats must be >= 1");
    std::vector<CellResult> cells;
    cells.reserve(repeats);
    for (int r = 0; r < repeats; ++r) {
        spec.seed = derive_seed(master_seed, 0xce11, r);
        cells.push_back(run_cell(spec));
    }
    return cells;
}

}  // namespace fbkde
