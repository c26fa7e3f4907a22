#pragma once

#include <cstdint>
#include <string>

#include "cfris/common.hpp"
#include "cfris/scenario.hpp"

namespace cfris {

/// Stacked complex channel matrices for one realization.
///   direct   : K x (L*N_t), row k is the direct channel d_k^H
///   ap_ris   : (R*N_s) x (L*N_t), RIS-major rows, AP-major columns; the
///              (r,l) block is the AP l -> RIS r link matrix
///   ris_user : K x (R*N_s), row k is f_k^H
struct ChannelSet {
    CMat direct;
    CMat ap_ris;
    CMat ris_user;

    int num_users() const { return static_cast<int>(direct.rows()); }
    int total_antennas() const { return static_cast<int>(direct.cols()); }
    int total_elements() const { return static_cast<int>(ap_ris.rows()); }

    auto ris_block(int r, int elements_per_ris) const {
        return ap_ris.middleRows(static_cast<Eigen::Index>(r) * elements_per_ris,
                                 elements_per_ris);
    }
};

struct PathGainStats {
    long clamped_below_ref = 0;  // links shorter than the reference distance
};

/// Distance path gain ref_gain * (d/d0)^-alpha, linear. Distances below the
/// reference distance are clamped to it and counted in stats.
double path_gain(double distance, double exponent, const SystemConfig& cfg,
                 PathGainStats* stats = nullptr);

/// Line-of-sight geometry for one link: half-wavelength ULA steering with
/// spatial frequency cos(azimuth) at both ends plus a bulk phase.
struct LosSpec {
    double rx_spatial_freq = 0.0;
    double tx_spatial_freq = 0.0;
    double phase = 0.0;
};

LosSpec los_between(const Eigen::Vector2d& tx, const Eigen::Vector2d& rx);

/// Every link draws from its own substream, so any single link matrix can be
/// regenerated in isolation from (seed, kind, endpoint indices).
enum class LinkKind { kDirect, kApRis, kRisUser };
std::uint64_t link_seed(std::uint64_t seed, LinkKind kind, int a, int b);

/// Rician-faded link matrix, rx_dim x tx_dim:
///   sqrt(gain) * (sqrt(beta/(1+beta)) * H_los + sqrt(1/(1+beta)) * H_nlos)
/// H_los is the unit-modulus steering outer product from `los`; H_nlos has
/// i.i.d. unit-variance circularly-symmetric Gaussian entries.
CMat rician_link(int rx_dim, int tx_dim, double gain, double beta, Rng& rng,
                 const LosSpec& los);

/// Draws every AP-UE, AP-RIS and RIS-UE link independently (each from its own
/// derived seed) and stacks them. Pure function of (cfg, geometry, seed).
ChannelSet synthesize_channels(const SystemConfig& cfg, const NetworkGeometry& geometry,
                               std::uint64_t seed, PathGainStats* stats = nullptr);

struct RisState;  // metrics.hpp

/// Effective downlink channel row h_k^H = d_k^H + theta^H diag(f_k^H) G for
/// user k, where theta is the conjugated coefficient vector convention used
/// by all quadratic forms (see theta_vector in transforms.hpp).
Eigen::RowVectorXcd effective_channel(const ChannelSet& ch, const RisState& ris, int k);

/// Text fixture format for regression tests; exact round-trip of doubles.
void save_channels(const ChannelSet& ch, const std::string& path);
ChannelSet load_channels(const std::string& path);

}  // namespace cfris
