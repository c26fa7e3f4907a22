#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfris/common.hpp"

namespace cfris {

/// All physical and algorithmic parameters. Internal units are linear
/// (watts, linear gains); dBm/dB exist only in the config file format.
struct SystemConfig {
    // network size
    int num_aps = 4;           // L
    int ap_antennas = 6;       // N_t per AP
    int num_ris = 2;           // R
    int ris_elements = 80;     // N_s per RIS
    int active_elements = 3;   // N_a per RIS (0 = fully passive surface)
    int num_users = 4;         // K single-antenna users
    double area_side = 200.0;  // square side, m
    // 0 = users uniform over the square; > 0 = users uniform in discs of
    // this radius around the surfaces (round-robin), clipped to the square
    double user_hotspot_radius = 0.0;
    // 0 = surfaces at the midpoints of two opposite area edges; > 0 =
    // surface r co-sited this many meters from AP (r mod L), displaced away
    // from the area center (cascade loss is minimized near an endpoint)
    double ris_ap_offset = 0.0;

    // budgets and noise, watts
    double ap_power_max = 1e-2;         // per-AP transmit budget (10 dBm)
    double ris_power_max = 1e-2;        // per-RIS transmit budget (10 dBm)
    double noise_user = 1e-11;          // AWGN at users (-80 dBm)
    double noise_ris = 2.511886431509580e-11;  // active-element effective noise (-76 dBm)

    // RIS element amplitude limit and amplifier efficiencies
    double max_active_amplitude = 10.0;  // passive elements are capped at 1
    double amp_eff_ap = 0.8;
    double amp_eff_ris = 0.8;

    double min_rate = 1.0;  // per-user rate floor, bits/s/Hz

    // propagation: gain = ref_gain * (d / ref_distance)^-alpha, Rician small scale
    double rician_factor = 1.995262314968880;  // 3 dB, linear
    double ref_gain = 1e-3;                    // -30 dB at ref_distance
    double ref_distance = 1.0;                 // m
    double pl_exp_direct = 2.8;                // AP-UE
    double pl_exp_ap_ris = 2.2;
    double pl_exp_ris_user = 2.2;

    // circuit power, watts
    double circuit_ap = 0.100;
    double circuit_passive = 0.010;  // per passive RIS element
    double circuit_active = 0.025;   // per active RIS element
    double circuit_user = 0.010;

    // algorithm controls
    std::uint64_t seed = 1;
    int max_outer_iters = 30;
    double tol_eta = 1e-4;   // relative EE change stopping rule
    double tol_feas = 1e-7;  // constraint violation tolerance, natural units
    double tol_kkt = 1e-6;   // solver stationarity tolerance
    int sca_inner_rounds = 1;     // >1 re-linearizes each subproblem in place
    int solver_max_iters = 5000;  // inner iteration cap per subproblem solve

    int total_antennas() const { return num_aps * ap_antennas; }     // L*N_t
    int total_elements() const { return num_ris * ris_elements; }    // N = R*N_s
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

struct NetworkGeometry {
    std::vector<Eigen::Vector2d> ap_positions;
    std::vector<Eigen::Vector2d> ris_positions;
    std::vector<Eigen::Vector2d> user_positions;
};

/// Per-element active/passive flags across all RISs, N = R*N_s entries,
/// RIS-major order. The first N_a entries of each RIS block are active.
struct SelectionMask {
    std::vector<bool> active;
    int count_active() const;
};

ValidationReport validate_config(const SystemConfig& cfg);

/// APs on a deterministic grid of cell centers, RISs at spread points on the
/// two opposite vertical area edges, users uniformly random in the square.
NetworkGeometry place_nodes(const SystemConfig& cfg, std::uint64_t seed);

SelectionMask build_selection_mask(const SystemConfig& cfg);

/// Flat key/value config file ("key = value", '#' comments). Unknown keys
/// are a load error. Keys not present keep the base config's value.
SystemConfig load_config(const std::string& path, const SystemConfig& base = {});
SystemConfig parse_config(const std::string& text, const SystemConfig& base = {});

/// Desk-scale profile used by CI and the acceptance suite.
SystemConfig default_ci_config();
/// Full-scale profile matching the reference simulation setup.
SystemConfig default_paper_config();

}  // namespace cfris
