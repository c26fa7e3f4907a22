#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cfris/driver.hpp"

namespace cfris {

enum class SweepParam { kApPowerDbm, kRisElements };

std::string to_string(SweepParam p);
SweepParam sweep_param_from_string(const std::string& name);

struct SweepSpec {
    SweepParam param = SweepParam::kApPowerDbm;
    std::vector<double> values;
    std::vector<BaselineMode> modes;
    int trials = 1;
    SystemConfig base;
    std::uint64_t master_seed = 1;
    int workers = 1;
};

/// Applies one swept value to a config (ap_power_dbm converts to watts,
/// ris_elements also clips the active count).
SystemConfig apply_sweep_value(const SystemConfig& base, SweepParam param, double value);

/// One CSV row per (value, mode, trial); trial seeds are a deterministic
/// function of (master seed, value index, mode index, trial index), so the
/// artifact is byte-identical across runs and worker counts.
void run_sweep(const SweepSpec& spec, std::ostream& out);

/// Per-iteration EE traces, one row per outer iteration per trial.
void run_convergence(const SystemConfig& cfg, const std::vector<BaselineMode>& modes,
                     int trials, std::uint64_t master_seed, int workers, std::ostream& out);

struct SummaryRow {
    double value = 0.0;
    std::string mode;
    int trials = 0;      // feasible trials entering the means
    int infeasible = 0;
    double eta_mean = 0.0;
    double eta_stderr = 0.0;
    double sum_rate_mean = 0.0;
    double sum_rate_stderr = 0.0;
};

/// Aggregates a sweep CSV per (value, mode). Throws on empty input.
std::vector<SummaryRow> summarize(std::istream& csv);
void write_summary(const std::vector<SummaryRow>& rows, std::ostream& out);

}  // namespace cfris
