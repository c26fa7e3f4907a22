#pragma once

#include <functional>
#include <vector>

#include "cfris/metrics.hpp"

namespace cfris {

/// Slack variables of the three fractional-programming reformulations.
/// `ee_ratio` is kept in the reporting unit (bits/Joule/Hz, equals the EE at
/// the point it was updated from). The surrogate objectives below run in
/// natural log, scaling the ratio by ln2 internally, so the closed-form
/// slack updates are exact stationary points.
struct SlackState {
    double ee_ratio = 0.0;  // Dinkelbach ratio
    RVec sinr_est;          // per-user SINR estimates (dual slack), >= 0
    CVec qt_weight;         // per-user quadratic-transform weights
};

/// theta-vector convention used by every quadratic form: the elementwise
/// conjugate of the physical coefficients. This function owns the conversion;
/// nothing else conjugates coefficients.
CVec theta_vector(const RisState& ris);

double update_ee_ratio(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const SystemConfig& cfg);

RVec update_sinr_estimates(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                           const SystemConfig& cfg);

CVec update_qt_weights(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const RVec& sinr_est, const SystemConfig& cfg);

/// Dinkelbach objective, bits: sum_k log2(1+gamma_k) - ratio * P_total.
double dinkelbach_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                        double ee_ratio, const SystemConfig& cfg);

/// Lagrangian-dual objective, nats (log-base decision above):
/// sum_k [ln(1+eps_k) - eps_k + (1+eps_k) gamma_k/(1+gamma_k)] - ratio_nat * P.
double dual_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                  const SlackState& slack, const SystemConfig& cfg);

/// Quadratic-transform surrogate, nats:
/// sum_k [2 sqrt(1+eps_k) Re(rho_k^* h_k^H w_k) - |rho_k|^2 B_k] - ratio_nat * P,
/// with B_k the full received-power denominator of user k.
double surrogate_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const SlackState& slack, const SystemConfig& cfg);

/// Same objective parameterized by the RIS vector theta at fixed beamformer.
double surrogate_value_theta(const ChannelSet& ch, const CVec& theta,
                             const SelectionMask& mask, const Beamformer& w_prev,
                             const SlackState& slack, const SystemConfig& cfg);

/// Rank-1 factors and diagonals behind every theta-quadratic form:
///   |h_k^H w_j|^2 = theta^H Q1_{k,j} theta + 2 Re(theta^H Q2_{k,j}) + Q3_{k,j}
/// with Q1_{k,j} = v_{k,j} v_{k,j}^H, v_{k,j} = diag(f_k^H) G w_j,
/// Q2_{k,j} = v_{k,j} conj(s_{k,j}), Q3_{k,j} = |s_{k,j}|^2, s_{k,j} = d_k^H w_j.
struct QuadraticForms {
    int users = 0;
    int elements = 0;
    std::vector<CVec> v;   // users*users entries, index k*users + j
    std::vector<cplx> s;   // users*users entries
    // per user k: diagonal of the amplified-noise quadratic, length N
    // (sigma_r^2 |f_{k,n}|^2 on active n, 0 elsewhere)
    std::vector<RVec> noise_diag;
    // per RIS r: diagonal of G_r W W^H G_r^H, length N_s
    std::vector<RVec> power_diag;

    const CVec& v_at(int k, int j) const { return v[k * users + j]; }
    cplx s_at(int k, int j) const { return s[k * users + j]; }
    CVec q1_apply(int k, int j, const CVec& x) const {
        const CVec& vk = v_at(k, j);
        return vk * (vk.dot(x));  // Eigen dot conjugates the left argument
    }
    CVec q2(int k, int j) const { return v_at(k, j) * std::conj(s_at(k, j)); }
    double q3(int k, int j) const { return std::norm(s_at(k, j)); }
};

QuadraticForms build_quadratic_forms(const ChannelSet& ch, const Beamformer& w,
                                     const RisState& ris, const SystemConfig& cfg);

/// Matrix-free power operators on x = vec(W) (column-stacked):
///   per AP   : (1/mu_A) ||block l of every column||^2
///   per RIS  : (1/mu_R) [ x^H (I_K (x) G_r^H Psi_r^H Psi_r G_r) x + kappa_r ]
/// kappa_r is the amplified-noise offset sigma_r^2 sum_{active} |a|^2.
struct VecPowerOperators {
    int total_antennas = 0;
    int users = 0;
    int ap_antennas = 0;
    double mu_ap = 1.0;
    double mu_ris = 1.0;
    std::vector<CMat> amplified_rows;   // per RIS: Psi_r G_r restricted to active rows
    std::vector<double> noise_offset;   // per RIS: kappa_r / mu_R

    CVec ap_apply(int l, const CVec& x) const;
    double ap_value(int l, const CVec& x) const;
    CVec ris_apply(int r, const CVec& x) const;
    double ris_value(int r, const CVec& x) const;  // includes noise offset
};

VecPowerOperators kron_power_operators(const ChannelSet& ch, const RisState& ris,
                                       const SystemConfig& cfg);

}  // namespace cfris
