#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "orbo/common.hpp"
#include "orbo/config.hpp"
#include "orbo/csv.hpp"
#include "orbo/gp_student_t.hpp"
#include "orbo/outlier_filter.hpp"
#include "orbo/report.hpp"

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides,
            int jobs, bool jobs_set, std::uint64_t seed, bool seed_set,
            const std::string& out_dir, bool out_set) {
    orbo::RunSpec spec;
    try {
        spec = orbo::load_run_spec(config_path, overrides);
    } catch (const orbo::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }
    if (jobs_set) spec.experiment.jobs = jobs;
    if (seed_set) spec.experiment.seed = seed;
    if (out_set) spec.output_dir = out_dir;
    try {
        spec.experiment.validate();
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }

    orbo::ExperimentResult result;
    try {
        result = orbo::run_experiment(spec.experiment);
    } catch (const std::exception& err) {
        std::cerr << "run failed before any trial completed: " << err.what() << "\n";
        return 3;
    }
    orbo::write_experiment_outputs(spec.output_dir, spec, result);
    if (!result.complete) {
        std::cerr << "run incomplete; see MANIFEST.txt in " << spec.output_dir << "\n";
        return 3;
    }
    return 0;
}

bool read_points_csv(std::istream& in, Eigen::MatrixXd& X, Eigen::VectorXd& y,
                     std::string& error) {
    std::string line;
    if (!std::getline(in, line)) {
        error = "missing header";
        return false;
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = orbo::split_csv_line(line);
    if (header.size() < 2 || header.back() != "y") {
        error = "header must be x_0,...,x_{d-1},y";
        return false;
    }
    const int d = static_cast<int>(header.size()) - 1;
    for (int j = 0; j < d; ++j) {
        if (header[j] != "x_" + std::to_string(j)) {
            error = "header must be x_0,...,x_{d-1},y";
            return false;
        }
    }

    std::vector<std::vector<double>> rows;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = orbo::split_csv_line(line);
        if (static_cast<int>(cells.size()) != d + 1) {
            error = "line " + std::to_string(line_no) + ": expected " + std::to_string(d + 1)
                    + " columns";
            return false;
        }
        std::vector<double> row(d + 1);
        for (int j = 0; j <= d; ++j) {
            if (!orbo::parse_double(cells[j], row[j])) {
                error = "line " + std::to_string(line_no) + ": bad number '" + cells[j] + "'";
                return false;
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        error = "no data rows";
        return false;
    }
    X.resize(static_cast<Eigen::Index>(rows.size()), d);
    y.resize(static_cast<Eigen::Index>(rows.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < d; ++j) X(static_cast<Eigen::Index>(i), j) = rows[i][j];
        y(static_cast<Eigen::Index>(i)) = rows[i][d];
    }
    return true;
}

int cmd_classify(const std::string& data_path, double alpha, double nu, double scale,
                 bool no_optimize, const std::vector<double>& lengthscales,
                 double signal_variance, std::uint64_t seed) {
    std::ifstream in(data_path);
    if (!in) {
        std::cerr << "classify: cannot open " << data_path << "\n";
        return 2;
    }
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
    std::string error;
    if (!read_points_csv(in, X, y, error)) {
        std::cerr << "classify: " << data_path << ": " << error << "\n";
        return 2;
    }

    try {
        orbo::Dataset data(X, y);
        orbo::KernelParams kernel;
        if (!lengthscales.empty()) {
            if (static_cast<Eigen::Index>(lengthscales.size()) != data.dim()) {
                std::cerr << "classify: --lengthscale needs " << data.dim() << " values\n";
                return 2;
            }
            kernel.lengthscales = Eigen::Map<const Eigen::VectorXd>(
                lengthscales.data(), static_cast<Eigen::Index>(lengthscales.size()));
        } else {
            Eigen::VectorXd width(data.dim());
            for (Eigen::Index j = 0; j < data.dim(); ++j) {
                double range = X.col(j).maxCoeff() - X.col(j).minCoeff();
                width(j) = range > 1e-12 ? 0.25 * range : 1.0;
            }
            kernel.lengthscales = width;
        }
        kernel.signal_variance = signal_variance;

        orbo::HyperFitOptions opts;
        opts.restarts = 5;
        opts.max_evals = 200;
        opts.seed = seed;
        const orbo::StudentTLikelihood lik(nu, scale);
        const auto model = orbo::fit_gp_student_t(data, kernel, lik, !no_optimize, opts);

        orbo::FilterConfig filter;
        filter.alpha = alpha;
        const auto report = orbo::classify_outliers(data, model, filter);

        std::cout << "index,label,score\n";
        for (Eigen::Index i = 0; i < data.size(); ++i) {
            std::cout << i << "," << (report.inlier_mask(i) ? "inlier" : "outlier") << ","
                      << orbo::format_double(report.scores(i)) << "\n";
        }
        return 0;
    } catch (const std::invalid_argument& err) {
        std::cerr << "classify: " << err.what() << "\n";
        return 2;
    } catch (const orbo::NumericalError& err) {
        std::cerr << "classify: numerical failure: " << err.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Outlier-robust Bayesian optimization benchmark"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run a benchmark experiment from a config file");
    std::string config_path;
    run->add_option("--config", config_path, "JSON experiment config")->required();
    int jobs = 1;
    auto* jobs_opt = run->add_option("--jobs", jobs, "parallel trial workers");
    std::uint64_t seed = 0;
    auto* seed_opt = run->add_option("--seed", seed, "master seed override");
    std::string out_dir;
    auto* out_opt = run->add_option("--out", out_dir, "output directory override");
    std::vector<std::string> overrides;
    run->add_option("overrides", overrides, "key=value config overrides");

    auto* classify = app.add_subcommand("classify", "Label a dataset with the robust diagnostic");
    std::string data_path;
    classify->add_option("--data", data_path, "CSV with columns x_0..x_{d-1},y")->required();
    double alpha = 0.05;
    classify->add_option("--alpha", alpha, "per-tail rejection level");
    double nu = 4.0;
    classify->add_option("--nu", nu, "Student-t degrees of freedom");
    double scale = 0.1;
    classify->add_option("--scale", scale, "likelihood scale (initial value when optimizing)");
    bool no_optimize = false;
    classify->add_flag("--no-optimize", no_optimize, "keep the supplied hyperparameters");
    std::vector<double> lengthscales;
    classify->add_option("--lengthscale", lengthscales, "kernel lengthscales")->delimiter(',');
    double signal_variance = 1.0;
    classify->add_option("--signal-variance", signal_variance, "kernel signal variance");
    std::uint64_t cls_seed = 0;
    classify->add_option("--seed", cls_seed, "hyperparameter search seed");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return cmd_run(config_path, overrides, jobs, jobs_opt->count() > 0, seed,
                       seed_opt->count() > 0, out_dir, out_opt->count() > 0);
    }
    return cmd_classify(data_path, alpha, nu, scale, no_optimize, lengthscales, signal_variance,
                        cls_seed);
}
