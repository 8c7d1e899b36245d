#include "fbkde/cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "fbkde/boxgrid.hpp"
#include "fbkde/experiments.hpp"
#include "fbkde/rng.hpp"

namespace fbkde::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i];
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (j.empty()) throw std::runtime_error("model: empty center list");
    Eigen::MatrixXd m(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i)
        for (std::size_t l = 0; l < j[i].size(); ++l)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = j[i][l];
    return m;
}

EstimatorKind kind_from_name(const std::string& method) {
    if (method == "fbkde") return EstimatorKind::Fbkde;
    if (method == "kde") return EstimatorKind::Kde;
    if (method == "vkde") return EstimatorKind::Vkde;
    throw std::runtime_error("unknown method: " + method);
}

TuningMethod tuning_from_name(const std::string& tuning) {
    if (tuning == "rot") return TuningMethod::RuleOfThumb;
    if (tuning == "cv") return TuningMethod::CrossValidation;
    throw std::runtime_error("unknown tuning: " + tuning);
}

int resolved_n_test(const RunConfig& config) {
    return config.n_test > 0 ? config.n_test : std::max(1, config.n / 4);
}

void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << body;
}

json config_echo(const RunConfig& config) {
    json echo;
    echo["density"] = config.density;
    echo["csv"] = config.csv;
    echo["n"] = config.n;
    echo["n_test"] = resolved_n_test(config);
    echo["seed"] = config.seed;
    echo["method"] = config.method;
    echo["tuning"] = config.tuning;
    echo["repeats"] = config.repeats;
    return echo;
}

struct ResolvedFit {
    WeightedDensity density;
    std::optional<Standardizer> standardizer;
    FitConfig fit_config;
    std::optional<QpSolution> diagnostics;
};

FitConfig resolve_params(const RunConfig& config, const Eigen::MatrixXd& train,
                         EstimatorKind kind) {
    if (config.tuning != "rot" && config.tuning != "cv")
        throw std::runtime_error("unknown tuning: " + config.tuning);
    FitConfig fit;
    fit.seed = derive_seed(config.seed, 0xf13);
    if (config.tuning == "cv" &&
        !(config.sigma > 0.0 && config.radius > 0.0 && config.gamma >= 0.0)) {
        CvPlan plan;
        plan.folds = cv_folds_for(static_cast<int>(train.rows()));
        plan.draws = config.cv_draws;
        plan.seed = derive_seed(config.seed, 0xc5);
        const CvResult cv = cross_validate(train, plan, kind);
        fit.sigma = cv.best.sigma;
        fit.radius = cv.best.radius;
        fit.sigma_gamma = cv.best.sigma_gamma;
    } else {
        fit.sigma = silverman_sigma(train);
        fit.radius = radius_rule(static_cast<int>(train.rows()),
                                 static_cast<int>(train.cols()));
        fit.sigma_gamma = train.rows() >= 6 ? gamma_rule(train) : 0.0;
    }
    if (config.sigma > 0.0) fit.sigma = config.sigma;
    if (config.radius > 0.0) fit.radius = config.radius;
    if (config.gamma >= 0.0) fit.sigma_gamma = config.gamma;
    return fit;
}

ResolvedFit fit_from_config(const RunConfig& config, const Eigen::MatrixXd& raw) {
    ResolvedFit out;
    if (config.method == "box") {
        // The grid construction lives on [0,1]^d; no standardization.
        out.fit_config.radius = config.radius > 0.0
                                    ? config.radius
                                    : radius_rule(static_cast<int>(raw.rows()),
                                                  static_cast<int>(raw.cols()));
        out.fit_config.seed = config.seed;
        FbkdeFit fit =
            fit_box_fbkde(raw, config.box_q, config.box_m, out.fit_config, true);
        out.density = std::move(fit.density);
        out.diagnostics = std::move(fit.solution);
        return out;
    }

    const EstimatorKind kind = kind_from_name(config.method);
    out.standardizer = Standardizer::fit(raw);
    const Eigen::MatrixXd train = out.standardizer->apply(raw);
    out.fit_config = resolve_params(config, train, kind);

    switch (kind) {
        case EstimatorKind::Fbkde: {
            FbkdeFit fit = fit_fbkde(train, out.fit_config);
            out.density = std::move(fit.density);
            out.diagnostics = std::move(fit.solution);
            break;
        }
        case EstimatorKind::Kde:
            out.density = fit_kde(train, out.fit_config.sigma);
            break;
        case EstimatorKind::Vkde:
            out.density = fit_vkde(train, out.fit_config.sigma);
            break;
    }
    return out;
}

Eigen::MatrixXd load_input_data(const RunConfig& config, int count, std::uint64_t seed) {
    if (!config.csv.empty() && !config.density.empty())
        throw std::runtime_error("exactly one data source required: --density or --csv");
    if (!config.csv.empty()) return read_csv(config.csv);
    if (config.density.empty())
        throw std::runtime_error("exactly one data source required: --density or --csv");
    return sample(MixtureDensity::by_name(config.density), count, seed);
}

}  // namespace

Eigen::MatrixXd read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);

    std::vector<std::vector<double>> rows;
    std::size_t width = 0;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<double> row;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos) comma = line.size();
            std::string cell = line.substr(start, comma - start);
            // trim spaces
            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            cell = first == std::string::npos ? "" : cell.substr(first, last - first + 1);
            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (ec != std::errc{} || ptr != cell.data() + cell.size())
                throw std::runtime_error("CSV row " + std::to_string(lineno) +
                                         ": non-numeric cell '" + cell + "'");
            row.push_back(value);
            start = comma + 1;
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw std::runtime_error("CSV row " + std::to_string(lineno) +
                                     ": expected " + std::to_string(width) +
                                     " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("CSV has no data rows: " + path);

    Eigen::MatrixXd data(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t l = 0; l < width; ++l)
            data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) = rows[i][l];
    return data;
}

int cmd_fit(const RunConfig& config) {
    const Eigen::MatrixXd raw = load_input_data(config, config.n, config.seed);
    const ResolvedFit fit = fit_from_config(config, raw);

    json model;
    model["config"] = config_echo(config);
    model["config"]["sigma"] = fit.fit_config.sigma;
    model["config"]["radius"] = fit.fit_config.radius;
    model["config"]["sigma_gamma"] = fit.fit_config.sigma_gamma;
    model["config"]["box_q"] = config.box_q;
    model["config"]["box_m"] = config.box_m;
    model["kernel"] = {
        {"family", fit.density.kernel.family == KernelFamily::Gaussian ? "gaussian" : "box"},
        {"sigma", fit.density.kernel.sigma},
        {"dim", fit.density.kernel.dim}};
    model["centers"] = matrix_to_json(fit.density.centers);
    model["weights"] = vector_to_json(fit.density.weights);
    model["per_center_sigma"] =
        fit.density.per_center_sigma ? vector_to_json(*fit.density.per_center_sigma)
                                     : json(nullptr);
    if (fit.standardizer) {
        model["standardizer"] = {{"mean", vector_to_json(fit.standardizer->mean)},
                                 {"std", vector_to_json(fit.standardizer->stddev)}};
    } else {
        model["standardizer"] = nullptr;
    }
    if (fit.diagnostics) {
        model["diagnostics"] = {{"iterations", fit.diagnostics->iterations},
                                {"primal_residual", fit.diagnostics->primal_residual},
                                {"dual_residual", fit.diagnostics->dual_residual},
                                {"converged", fit.diagnostics->converged}};
    } else {
        model["diagnostics"] = nullptr;
    }

    const std::string body = model.dump(2) + "\n";
    if (config.out.empty())
        std::cout << body;
    else
        write_text_file(config.out, body);
    return 0;
}

int cmd_eval(const RunConfig& config) {
    if (config.model.empty()) throw std::runtime_error("eval requires --model");
    std::ifstream in(config.model);
    if (!in) throw std::runtime_error("cannot open model file: " + config.model);
    json model = json::parse(in);

    WeightedDensity density;
    const std::string family = model["kernel"]["family"];
    density.kernel.family = family == "gaussian" ? KernelFamily::Gaussian : KernelFamily::Box;
    density.kernel.sigma = model["kernel"]["sigma"];
    density.kernel.dim = model["kernel"]["dim"];
    density.centers = matrix_from_json(model["centers"]);
    density.weights = vector_from_json(model["weights"]);
    if (!model["per_center_sigma"].is_null())
        density.per_center_sigma = vector_from_json(model["per_center_sigma"]);
    density.validate();

    std::optional<Standardizer> standardizer;
    if (!model["standardizer"].is_null()) {
        Standardizer s;
        s.mean = vector_from_json(model["standardizer"]["mean"]);
        s.stddev = vector_from_json(model["standardizer"]["std"]);
        standardizer = s;
    }

    const int n_test = resolved_n_test(config);
    Eigen::MatrixXd test = load_input_data(config, n_test, config.seed);
    if (standardizer) test = standardizer->apply(test);

    EvalReport report;
    report.n_train = static_cast<int>(density.centers.rows());
    report.n_test = static_cast<int>(test.rows());
    report.j_test = j_test(density, test);
    report.hoeffding_bound =
        hoeffding_bound(report.n_train, model["config"]["radius"],
                        density.kernel.sup_bound(), 0.05);
    if (!config.density.empty() && density.kernel.dim == 1 && standardizer) {
        const MixtureDensity truth = MixtureDensity::by_name(config.density)
                                         .standardized((*standardizer).mean[0],
                                                       (*standardizer).stddev[0]);
        const double lo = density.centers.col(0).minCoeff() - config.grid_pad;
        const double hi = density.centers.col(0).maxCoeff() + config.grid_pad;
        report.sup_error =
            sup_error(density, truth, eval_grid_1d(lo, hi, config.grid_points));
        report.ise = ise(density, truth, lo, hi);
    }

    json out;
    out["j_test"] = report.j_test;
    out["sup_error"] = report.sup_error ? json(*report.sup_error) : json(nullptr);
    out["ise"] = report.ise ? json(*report.ise) : json(nullptr);
    out["hoeffding_bound"] = report.hoeffding_bound;
    out["n_train"] = report.n_train;
    out["n_test"] = report.n_test;
    const std::string body = out.dump(2) + "\n";
    if (config.out.empty())
        std::cout << body;
    else
        write_text_file(config.out, body);
    return 0;
}

namespace {

json aggregate_to_json(const Aggregate& agg) {
    json j;
    j["j_mean"] = agg.j_mean;
    j["j_std"] = agg.j_std;
    j["sup_mean"] = agg.sup_mean;
    j["sup_std"] = agg.sup_std;
    j["ise_mean"] = agg.ise_mean;
    j["ise_std"] = agg.ise_std;
    j["repeats"] = agg.repeats;
    j["failures"] = agg.failures;
    return j;
}

}  // namespace

int cmd_bench(const RunConfig& config) {
    const std::vector<std::string> densities =
        config.density.empty() || config.density == "all"
            ? std::vector<std::string>{"bimodal", "triangular", "trimodal", "kurtotic"}
            : std::vector<std::string>{config.density};
    const std::vector<std::string> methods = {"fbkde", "kde", "vkde"};
    const std::vector<std::string> tunings =
        config.tuning == "both" ? std::vector<std::string>{"rot", "cv"}
                                : std::vector<std::string>{config.tuning};

    json result;
    result["config"] = config_echo(config);
    result["cells"] = json::array();

    std::ostringstream table;
    table << "density     tuning  metric   ";
    for (const auto& m : methods) table << m << std::string(18 - m.size(), ' ');
    table << "\n";

    std::uint64_t cell_index = 0;
    for (const auto& density_name : densities) {
        for (const auto& tuning : tunings) {
            std::vector<Aggregate> aggs;
            for (const auto& method : methods) {
                CellSpec spec;
                spec.density = MixtureDensity::by_name(density_name);
                spec.method = kind_from_name(method);
                spec.tuning = tuning_from_name(tuning);
                spec.n_train = config.n;
                spec.n_test = resolved_n_test(config);
                spec.cv_draws = config.cv_draws;
                spec.grid_points = config.grid_points;
                spec.grid_pad = config.grid_pad;
                const auto cells =
                    repeat_cell(spec, config.repeats, derive_seed(config.seed, cell_index++));
                const Aggregate agg = aggregate_cells(cells);
                aggs.push_back(agg);

                json cell = aggregate_to_json(agg);
                cell["density"] = density_name;
                cell["method"] = method;
                cell["tuning"] = tuning;
                result["cells"].push_back(std::move(cell));
            }
            auto emit_row = [&](const std::string& metric, auto pick_mean, auto pick_std) {
                table << density_name << std::string(12 - density_name.size(), ' ')
                      << tuning << std::string(8 - tuning.size(), ' ') << metric
                      << std::string(9 - metric.size(), ' ');
                for (const auto& agg : aggs) {
                    const std::string cell =
                        fmt_double(pick_mean(agg)) + "+-" + fmt_double(pick_std(agg));
                    table << cell
                          << std::string(cell.size() < 18 ? 18 - cell.size() : 1, ' ');
                }
                table << "\n";
            };
            emit_row(
                "J_T", [](const Aggregate& a) { return a.j_mean; },
                [](const Aggregate& a) { return a.j_std; });
            emit_row(
                "sup", [](const Aggregate& a) { return a.sup_mean; },
                [](const Aggregate& a) { return a.sup_std; });
        }
    }

    std::cout << table.str();
    if (!config.out.empty()) {
        write_text_file(config.out, result.dump(2) + "\n");
        write_text_file(config.out + ".txt", table.str());
    }
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    const std::string density_name = config.density.empty() ? "bimodal" : config.density;
    const std::vector<std::string> methods = {"fbkde", "kde", "vkde"};

    json result;
    result["config"] = config_echo(config);
    result["rows"] = json::array();

    std::ostringstream csv;
    csv << "n,method,metric,mean,std\n";

    std::uint64_t cell_index = 0;
    for (int n : config.sweep_sizes) {
        for (const auto& method : methods) {
            CellSpec spec;
            spec.density = MixtureDensity::by_name(density_name);
            spec.method = kind_from_name(method);
            spec.tuning = TuningMethod::RuleOfThumb;
            spec.n_train = n;
            spec.n_test = std::max(1, n / 4);
            spec.grid_points = config.grid_points;
            spec.grid_pad = config.grid_pad;
            const auto cells =
                repeat_cell(spec, config.repeats, derive_seed(config.seed, cell_index++));
            const Aggregate agg = aggregate_cells(cells);

            json row = aggregate_to_json(agg);
            row["n"] = n;
            row["method"] = method;
            result["rows"].push_back(std::move(row));

            csv << n << "," << method << ",j_test," << fmt_double(agg.j_mean) << ","
                << fmt_double(agg.j_std) << "\n";
            csv << n << "," << method << ",sup_error," << fmt_double(agg.sup_mean)
                << "," << fmt_double(agg.sup_std) << "\n";
            csv << n << "," << method << ",ise," << fmt_double(agg.ise_mean) << ","
                << fmt_double(agg.ise_std) << "\n";
        }
    }

    if (config.out.empty()) {
        std::cout << csv.str();
    } else {
        write_text_file(config.out, result.dump(2) + "\n");
        write_text_file(config.out + ".csv", csv.str());
    }
    return 0;
}

int cmd_plotdata(const RunConfig& config) {
    const std::string density_name = config.density.empty() ? "bimodal" : config.density;
    const MixtureDensity truth = MixtureDensity::by_name(density_name);
    if (truth.dim() != 1) throw std::runtime_error("plotdata supports d = 1 only");

    const int n_test = resolved_n_test(config);
    const Eigen::MatrixXd raw = sample(truth, config.n + n_test, config.seed);
    const Eigen::MatrixXd raw_train = raw.topRows(config.n);
    const Standardizer standardizer = Standardizer::fit(raw_train);
    const Eigen::MatrixXd train = standardizer.apply(raw_train);

    RunConfig fit_cfg = config;
    fit_cfg.csv.clear();
    auto fit_method = [&](const std::string& method) {
        RunConfig c = fit_cfg;
        c.method = method;
        const EstimatorKind kind = kind_from_name(method);
        const FitConfig params = resolve_params(c, train, kind);
        switch (kind) {
            case EstimatorKind::Fbkde:
                return fit_fbkde(train, params).density;
            case EstimatorKind::Kde:
                return fit_kde(train, params.sigma);
            case EstimatorKind::Vkde:
            default:
                return fit_vkde(train, params.sigma);
        }
    };
    const WeightedDensity fb = fit_method("fbkde");
    const WeightedDensity kde = fit_method("kde");
    const WeightedDensity vkde = fit_method("vkde");

    const double m = standardizer.mean[0];
    const double s = standardizer.stddev[0];
    const double lo = train.col(0).minCoeff() - config.grid_pad;
    const double hi = train.col(0).maxCoeff() + config.grid_pad;
    const Eigen::MatrixXd grid = eval_grid_1d(lo, hi, config.grid_points);
    const Eigen::VectorXd fb_values = density_eval_grid(fb, grid);
    const Eigen::VectorXd kde_values = density_eval_grid(kde, grid);
    const Eigen::VectorXd vkde_values = density_eval_grid(vkde, grid);

    // Emit in original units: x = m + s u, densities divided by s.
    std::ostringstream csv;
    csv << "x,pdf,fbkde,kde,vkde\n";
    for (Eigen::Index p = 0; p < grid.rows(); ++p) {
        Eigen::VectorXd x(1);
        x[0] = m + s * grid(p, 0);
        csv << fmt_double(x[0]) << "," << fmt_double(pdf(truth, x)) << ","
            << fmt_double(fb_values[p] / s) << "," << fmt_double(kde_values[p] / s)
            << "," << fmt_double(vkde_values[p] / s) << "\n";
    }

    std::ostringstream stem;
    stem << "z,alpha\n";
    for (Eigen::Index i = 0; i < fb.centers.rows(); ++i)
        stem << fmt_double(m + s * fb.centers(i, 0)) << "," << fmt_double(fb.weights[i])
             << "\n";

    if (config.out.empty()) {
        std::cout << csv.str();
        std::cout << stem.str();
    } else {
        write_text_file(config.out, csv.str());
        write_text_file(config.out + ".stem.csv", stem.str());
    }
    return 0;
}

}  // namespace fbkde::cli
