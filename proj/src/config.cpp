#include "orbo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace orbo {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& path,
                         const std::set<std::string>& known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key()))
            throw ConfigError("unknown key '" + path + it.key() + "'");
    }
}

template <typename T>
T get_or(const json& obj, const std::string& key, const std::string& path, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& err) {
        throw ConfigError("bad value for '" + path + key + "': " + err.what());
    }
}

ObjectiveSpec parse_objective(const json& obj) {
    reject_unknown_keys(obj, "objective.",
                        {"kernel", "dim", "bounds", "lengthscales", "signal_variance",
                         "rq_alpha"});
    ObjectiveSpec spec;
    const std::string kernel = get_or<std::string>(obj, "kernel", "objective.", "matern52");
    if (kernel == "matern52") {
        spec.family = KernelFamily::Matern52;
    } else if (kernel == "rational_quadratic") {
        spec.family = KernelFamily::RationalQuadratic;
    } else {
        throw ConfigError("objective.kernel must be 'matern52' or 'rational_quadratic'");
    }
    spec.dim = get_or<int>(obj, "dim", "objective.", 2);
    if (spec.dim < 1) throw ConfigError("objective.dim must be >= 1");
    if (obj.contains("bounds")) {
        const auto rows = get_or<std::vector<std::vector<double>>>(obj, "bounds", "objective.", {});
        spec.bounds.resize(static_cast<Eigen::Index>(rows.size()), 2);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != 2) throw ConfigError("objective.bounds rows must be [lo, hi]");
            spec.bounds(static_cast<Eigen::Index>(i), 0) = rows[i][0];
            spec.bounds(static_cast<Eigen::Index>(i), 1) = rows[i][1];
        }
    }
    if (obj.contains("lengthscales")) {
        const auto ls = get_or<std::vector<double>>(obj, "lengthscales", "objective.", {});
        spec.lengthscales =
            Eigen::Map<const Eigen::VectorXd>(ls.data(), static_cast<Eigen::Index>(ls.size()));
    }
    spec.signal_variance = get_or<double>(obj, "signal_variance", "objective.", 1.0);
    spec.rq_alpha = get_or<double>(obj, "rq_alpha", "objective.", 2.0);
    return spec;
}

}  // namespace

RunSpec parse_run_spec(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
    reject_unknown_keys(doc, "",
                        {"objective", "modes", "outlier_rates", "trials", "budget", "init_count",
                         "filter", "seed", "output_dir", "min_estimate_points", "jobs",
                         "persist_mask", "hyper", "acquisition"});

    RunSpec spec;
    ExperimentConfig& e = spec.experiment;
    if (doc.contains("objective")) e.objective = parse_objective(doc.at("objective"));

    const auto modes = get_or<std::vector<std::string>>(
        doc, "modes", "", {"filtered", "t_likelihood", "t_process", "baseline", "no_outliers"});
    e.arms.clear();
    for (const auto& m : modes) {
        try {
            e.arms.push_back(arm_from_label(m));
        } catch (const std::invalid_argument& err) {
            throw ConfigError(std::string("modes: ") + err.what());
        }
    }

    e.outlier_rates = get_or<std::vector<double>>(doc, "outlier_rates", "", {0.1, 0.2});
    e.trials = get_or<int>(doc, "trials", "", 20);
    e.budget = get_or<int>(doc, "budget", "", 50);
    e.init_count = get_or<int>(doc, "init_count", "", 10);

    if (doc.contains("filter")) {
        const json& f = doc.at("filter");
        reject_unknown_keys(f, "filter.", {"alpha", "n_init", "n_s"});
        e.filter.alpha = get_or<double>(f, "alpha", "filter.", 0.05);
        e.filter.n_init = get_or<int>(f, "n_init", "filter.", 10);
        e.filter.n_s = get_or<int>(f, "n_s", "filter.", 2);
    }

    e.seed = get_or<std::uint64_t>(doc, "seed", "", 0);
    spec.output_dir = get_or<std::string>(doc, "output_dir", "", "runs");
    e.min_estimate_points = get_or<int>(doc, "min_estimate_points", "", 1000);
    e.jobs = get_or<int>(doc, "jobs", "", 1);
    e.persist_mask = get_or<bool>(doc, "persist_mask", "", false);

    if (doc.contains("hyper")) {
        const json& h = doc.at("hyper");
        reject_unknown_keys(h, "hyper.", {"restarts", "max_evals"});
        e.hyper_restarts = get_or<int>(h, "restarts", "hyper.", 2);
        e.hyper_max_evals = get_or<int>(h, "max_evals", "hyper.", 100);
    }
    if (doc.contains("acquisition")) {
        const json& a = doc.at("acquisition");
        reject_unknown_keys(a, "acquisition.", {"candidates", "top_refine", "sweeps"});
        e.acq.candidates = get_or<int>(a, "candidates", "acquisition.", 1000);
        e.acq.top_refine = get_or<int>(a, "top_refine", "acquisition.", 5);
        e.acq.sweeps = get_or<int>(a, "sweeps", "acquisition.", 20);
    }

    try {
        e.validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(err.what());
    }
    return spec;
}

nlohmann::json snapshot_run_spec(const RunSpec& spec) {
    const ExperimentConfig& e = spec.experiment;
    json doc;
    json obj;
    obj["kernel"] =
        e.objective.family == KernelFamily::Matern52 ? "matern52" : "rational_quadratic";
    obj["dim"] = e.objective.dim;
    const Eigen::MatrixXd bounds = e.objective.resolved_bounds();
    json jb = json::array();
    for (Eigen::Index i = 0; i < bounds.rows(); ++i)
        jb.push_back({bounds(i, 0), bounds(i, 1)});
    obj["bounds"] = jb;
    const KernelParams gen = e.objective.resolved_kernel();
    obj["lengthscales"] =
        std::vector<double>(gen.lengthscales.data(), gen.lengthscales.data() + gen.lengthscales.size());
    obj["signal_variance"] = e.objective.signal_variance;
    obj["rq_alpha"] = e.objective.rq_alpha;
    doc["objective"] = obj;

    std::vector<std::string> modes;
    for (const auto& arm : e.arms) modes.push_back(arm.label);
    doc["modes"] = modes;
    doc["outlier_rates"] = e.outlier_rates;
    doc["trials"] = e.trials;
    doc["budget"] = e.budget;
    doc["init_count"] = e.init_count;
    doc["filter"] = {{"alpha", e.filter.alpha}, {"n_init", e.filter.n_init}, {"n_s", e.filter.n_s}};
    doc["seed"] = e.seed;
    doc["output_dir"] = spec.output_dir;
    doc["min_estimate_points"] = e.min_estimate_points;
    doc["jobs"] = e.jobs;
    doc["persist_mask"] = e.persist_mask;
    doc["hyper"] = {{"restarts", e.hyper_restarts}, {"max_evals", e.hyper_max_evals}};
    doc["acquisition"] = {{"candidates", e.acq.candidates},
                          {"top_refine", e.acq.top_refine},
                          {"sweeps", e.acq.sweeps}};
    return doc;
}

RunSpec load_run_spec(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        size_t line = 1;
        const size_t limit = std::min(err.byte, text.size());
        for (size_t i = 0; i < limit; ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError(path + ":" + std::to_string(line) + ": " + err.what());
    }

    for (const auto& ov : overrides) {
        const size_t eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override must look like key=value: '" + ov + "'");
        const std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;  // bare word: treat as string
        }
        json* node = &doc;
        size_t start = 0;
        for (;;) {
            const size_t dot = key.find('.', start);
            const std::string part = key.substr(start, dot - start);
            if (part.empty()) throw ConfigError("bad override key: '" + key + "'");
            if (dot == std::string::npos) {
                (*node)[part] = value;
                break;
            }
            node = &(*node)[part];
            start = dot + 1;
        }
    }

    return parse_run_spec(doc);
}

}  // namespace orbo
