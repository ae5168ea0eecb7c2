#include "orbo/report.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "orbo/csv.hpp"

namespace orbo {

namespace {

std::string pad_trial(int trial) {
    std::ostringstream os;
    os << std::setw(3) << std::setfill('0') << trial;
    return os.str();
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

}  // namespace

std::string trial_csv_name(const std::string& arm_label, double rate, int trial) {
    return "trial_" + arm_label + "_rho" + format_double(rate) + "_" + pad_trial(trial) + ".csv";
}

std::string summary_csv_name(const std::string& arm_label, double rate) {
    return "summary_" + arm_label + "_rho" + format_double(rate) + ".csv";
}

void write_experiment_outputs(const std::filesystem::path& dir, const RunSpec& spec,
                              const ExperimentResult& result) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> files;

    {
        auto out = open_out(dir / "config_snapshot.json");
        out << snapshot_run_spec(spec).dump(2) << "\n";
        files.push_back("config_snapshot.json");
    }

    const int d = spec.experiment.objective.dim;
    for (const auto& tr : result.trials) {
        const std::string name = trial_csv_name(tr.arm_label, tr.rate, tr.trial);
        auto out = open_out(dir / name);
        out << "iteration";
        for (int j = 0; j < d; ++j) out << ",x_" << j;
        out << ",y_observed,was_outlier,is_masked,y_star_true\n";
        for (size_t i = 0; i < tr.log.records.size(); ++i) {
            const IterationRecord& rec = tr.log.records[i];
            out << rec.iteration;
            for (int j = 0; j < d; ++j) out << "," << format_double(rec.x(j));
            const bool masked = static_cast<Eigen::Index>(i) < tr.log.final_mask.size()
                                && !tr.log.final_mask(static_cast<Eigen::Index>(i));
            out << "," << format_double(rec.y_observed) << ","
                << (rec.was_injected_outlier.value_or(false) ? 1 : 0) << "," << (masked ? 1 : 0)
                << ","
                << format_double(rec.y_star_true_so_far.value_or(
                       std::numeric_limits<double>::quiet_NaN()))
                << "\n";
        }
        files.push_back(name);
    }

    for (const auto& curve : result.summaries) {
        const std::string name = summary_csv_name(curve.arm_label, curve.rate);
        auto out = open_out(dir / name);
        out << "iteration,mean_regret,ci_halfwidth\n";
        for (size_t k = 0; k < curve.mean_regret.size(); ++k) {
            out << (k + 1) << "," << format_double(curve.mean_regret[k]) << ","
                << format_double(curve.ci_halfwidth[k]) << "\n";
        }
        files.push_back(name);
    }

    {
        auto out = open_out(dir / "trials_manifest.csv");
        out << "mode,rho,trial,f_min_estimate,status\n";
        for (const auto& tr : result.trials) {
            out << tr.arm_label << "," << format_double(tr.rate) << "," << tr.trial << ","
                << format_double(tr.f_min_estimate) << "," << (tr.ok ? "ok" : "failed") << "\n";
        }
        files.push_back("trials_manifest.csv");
    }

    {
        auto out = open_out(dir / "MANIFEST.txt");
        out << "status: " << (result.complete ? "complete" : "incomplete") << "\n";
        for (const auto& err : result.errors) out << "error: " << err << "\n";
        for (const auto& f : files) out << "file: " << f << "\n";
        out << "file: MANIFEST.txt\n";
    }
}

}  // namespace orbo
