#pragma once

#include "cfris/channel.hpp"
#include "cfris/common.hpp"
#include "cfris/scenario.hpp"

namespace cfris {

/// Stacked transmit beamformer, (L*N_t) x K; column k serves user k, row
/// block l belongs to AP l.
struct Beamformer {
    CMat w;

    auto ap_block(int l, int ap_antennas) const {
        return w.middleRows(static_cast<Eigen::Index>(l) * ap_antennas, ap_antennas);
    }
};

/// Physical RIS coefficients a_n = |a_n| e^{j phi_n} for all N elements plus
/// the active-element mask. Quadratic-form code works on the conjugated
/// vector; theta_vector() in transforms.hpp owns that conversion.
struct RisState {
    CVec coeffs;
    SelectionMask mask;

    static RisState zeros(const SystemConfig& cfg) {
        return {CVec::Zero(cfg.total_elements()), build_selection_mask(cfg)};
    }
};

struct PowerBreakdown {
    RVec ap_tx;      // per AP, watts
    RVec ris_tx;     // per RIS, watts
    double circuit;  // watts
    double total;    // sum of everything above
};

/// Signed constraint values; positive means violated by that amount.
struct FeasibilityReport {
    RVec ap_power;           // P_l - P_max_A, watts
    RVec ris_power;          // P_r - P_max_R, watts
    RVec active_amplitude;   // |a_n| - a_max over active elements
    RVec passive_amplitude;  // |a_n| - 1 over passive elements
    RVec rate;               // R_th - R_k, bits/s/Hz

    double max_violation() const;
    bool feasible(double tol) const { return max_violation() <= tol; }
};

/// Effective amplified-noise power seen by user k, sum over RISs of
/// sigma_r^2 ||f_{r,k}^H Psi_r||^2.
double ris_noise_power(const ChannelSet& ch, const RisState& ris, int k,
                       const SystemConfig& cfg);

double sinr(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int k,
            const SystemConfig& cfg);

double user_rate(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int k,
                 const SystemConfig& cfg);

double sum_rate(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                const SystemConfig& cfg);

RVec all_sinrs(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
               const SystemConfig& cfg);

double ap_tx_power(const Beamformer& w, int l, const SystemConfig& cfg);

double ris_tx_power(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int r,
                    const SystemConfig& cfg);

double circuit_power(const SystemConfig& cfg);

PowerBreakdown total_power(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                           const SystemConfig& cfg);

double energy_efficiency(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                         const SystemConfig& cfg);

FeasibilityReport check_feasibility(const ChannelSet& ch, const Beamformer& w,
                                    const RisState& ris, const SystemConfig& cfg);

}  // namespace cfris
