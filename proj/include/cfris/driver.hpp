#pragma once

#include <string>

#include "cfris/solver.hpp"

namespace cfris {

enum class BaselineMode { kProposed, kActiveRis, kPassiveRis, kRandomTheta, kAllAp };

std::string to_string(BaselineMode mode);
BaselineMode mode_from_string(const std::string& name);

struct IterationRecord {
    int iter = 0;
    double ee = 0.0;        // bits/Joule/Hz
    double sum_rate = 0.0;  // bits/s/Hz
    PowerBreakdown power;
    double dinkelbach = 0.0;  // f1 at this point with the ratio used this iteration
    double surrogate = 0.0;   // concave surrogate value at this point
    SlackState slack;
    double max_violation = 0.0;
    double wall_seconds = 0.0;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    int iterations() const { return static_cast<int>(records.size()) - 1; }
};

/// |f1| at the final iterate with the final Dinkelbach ratio; small values
/// certify the fixed point.
double dinkelbach_residual(const IterationTrace& trace);

/// Baseline adjustments that act on the configuration itself: ActiveRis and
/// PassiveRis flip the active-element count, AllAp turns the R surfaces into
/// R additional APs with the total transmit budget unchanged.
SystemConfig apply_mode(const SystemConfig& cfg, BaselineMode mode);

/// Geometry under a mode: AllAp reuses the RIS sites for the extra APs.
NetworkGeometry mode_geometry(const NetworkGeometry& geo, BaselineMode mode);

struct InitState {
    Beamformer w;
    RisState ris;
    SlackState slack;
    bool feasible = false;
};

/// Random-phase RIS coefficients (unit passive amplitude, budget-safe active
/// amplitude), per-user maximum-ratio beamforming scaled into the power
/// budgets, then a max-min rate restoration phase if the rate floor is not
/// yet met. Slack variables are set by their closed-form updates.
InitState initialize(const ChannelSet& ch, const SystemConfig& cfg, BaselineMode mode,
                     std::uint64_t seed);

struct OptimizeResult {
    Beamformer w;
    RisState ris;
    IterationTrace trace;
    bool feasible = false;
};

/// The outer block-coordinate loop: per iteration, closed-form updates of the
/// three slack variables, the beamforming subproblem, the RIS subproblem
/// (skipped for RandomTheta/AllAp), then the EE recomputation, until the
/// relative EE change drops below tol_eta or the iteration cap is hit.
OptimizeResult optimize(const ChannelSet& ch, const SystemConfig& cfg, BaselineMode mode,
                        std::uint64_t seed);

struct TrialResult {
    bool feasible = false;
    int iterations = 0;
    double ee = 0.0;
    double sum_rate = 0.0;
    PowerBreakdown power;
    RVec user_rates;
    IterationTrace trace;
};

/// Full pipeline for one Monte-Carlo trial: mode-adjusted config, node
/// placement, channel synthesis, optimization.
TrialResult run_trial(const SystemConfig& cfg, BaselineMode mode, std::uint64_t seed);

}  // namespace cfris
