// Command-line front end: single trials, Monte-Carlo sweeps, convergence
// traces and CSV summaries.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cfris/experiments.hpp"

namespace {

cfris::SystemConfig resolve_config(const std::string& config_path,
                                   const std::string& profile) {
    cfris::SystemConfig base =
        (profile == "paper") ? cfris::default_paper_config() : cfris::default_ci_config();
    if (!config_path.empty()) base = cfris::load_config(config_path, base);
    const cfris::ValidationReport rep = cfris::validate_config(base);
    if (!rep.ok()) {
        std::string msg = "invalid configuration:";
        for (const auto& v : rep.violations) msg += "\n  - " + v;
        throw std::runtime_error(msg);
    }
    return base;
}

std::vector<cfris::BaselineMode> parse_modes(const std::vector<std::string>& names) {
    std::vector<cfris::BaselineMode> modes;
    modes.reserve(names.size());
    for (const auto& n : names) modes.push_back(cfris::mode_from_string(n));
    return modes;
}

class OutputTarget {
  public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_.good()) throw std::runtime_error("cannot open output '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

  private:
    std::ofstream file_;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid-RIS cell-free downlink energy-efficiency simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string profile = "ci";
    std::uint64_t seed = 1;
    int workers = 1;
    app.add_option("--config", config_path, "config file (key = value lines)");
    app.add_option("--profile", profile, "base profile: ci or paper")
        ->check(CLI::IsMember({"ci", "paper"}));
    app.add_option("--seed", seed, "master seed");
    app.add_option("--workers", workers, "worker threads for trial-level parallelism")
        ->check(CLI::PositiveNumber);

    auto* run = app.add_subcommand("run", "single trial, prints the iteration trace");
    std::string run_mode = "Proposed";
    run->add_option("--mode", run_mode, "Proposed|ActiveRis|PassiveRis|RandomTheta|AllAp");

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo parameter sweep to CSV");
    std::string sweep_param = "ap_power_dbm";
    std::vector<double> sweep_values;
    std::vector<std::string> sweep_modes = {"Proposed"};
    int sweep_trials = 5;
    std::string sweep_out;
    sweep->add_option("--param", sweep_param, "ap_power_dbm|ris_elements");
    sweep->add_option("--values", sweep_values, "swept values")->required()->delimiter(',');
    sweep->add_option("--modes", sweep_modes, "modes to run")->delimiter(',');
    sweep->add_option("--trials", sweep_trials, "trials per point")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");

    auto* conv = app.add_subcommand("convergence", "per-iteration EE traces to CSV");
    std::vector<std::string> conv_modes = {"Proposed"};
    int conv_trials = 5;
    std::string conv_out;
    conv->add_option("--modes", conv_modes, "modes to run")->delimiter(',');
    conv->add_option("--trials", conv_trials, "trials per mode")->check(CLI::PositiveNumber);
    conv->add_option("--out", conv_out, "output CSV path (default stdout)");

    auto* summ = app.add_subcommand("summarize", "aggregate a sweep CSV per (value, mode)");
    std::string summ_in;
    std::string summ_out;
    summ->add_option("--in", summ_in, "input CSV path")->required();
    summ->add_option("--out", summ_out, "output CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const cfris::SystemConfig cfg = resolve_config(config_path, profile);
            const cfris::TrialResult res =
                cfris::run_trial(cfg, cfris::mode_from_string(run_mode), seed);
            if (!res.feasible) {
                std::cout << "trial infeasible (rate floor unreachable)\n";
                return 0;
            }
            std::cout << "iter        eta   sum_rate    p_total     f1_residual\n";
            for (const auto& rec : res.trace.records) {
                std::printf("%4d %10.4f %10.4f %10.4f %15.3e\n", rec.iter, rec.ee,
                            rec.sum_rate, rec.power.total, rec.dinkelbach);
            }
            std::printf("final: eta=%.6g bits/J/Hz, sum rate=%.6g bits/s/Hz, power=%.6g W\n",
                        res.ee, res.sum_rate, res.power.total);
        } else if (sweep->parsed()) {
            cfris::SweepSpec spec;
            spec.param = cfris::sweep_param_from_string(sweep_param);
            spec.values = sweep_values;
            spec.modes = parse_modes(sweep_modes);
            spec.trials = sweep_trials;
            spec.base = resolve_config(config_path, profile);
            spec.master_seed = seed;
            spec.workers = workers;
            OutputTarget out(sweep_out);
            cfris::run_sweep(spec, out.stream());
        } else if (conv->parsed()) {
            const cfris::SystemConfig cfg = resolve_config(config_path, profile);
            OutputTarget out(conv_out);
            cfris::run_convergence(cfg, parse_modes(conv_modes), conv_trials, seed, workers,
                                   out.stream());
        } else if (summ->parsed()) {
            std::ifstream in(summ_in);
            if (!in.good()) throw std::runtime_error("cannot open input '" + summ_in + "'");
            const auto rows = cfris::summarize(in);
            OutputTarget out(summ_out);
            cfris::write_summary(rows, out.stream());
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
