#include "cfris/driver.hpp"

#include <chrono>

namespace cfris {

namespace {

constexpr std::uint64_t kTagInit = 0x696e6974u;

double elapsed_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string to_string(BaselineMode mode) {
    switch (mode) {
        case BaselineMode::kProposed: return "Proposed";
        case BaselineMode::kActiveRis: return "ActiveRis";
        case BaselineMode::kPassiveRis: return "PassiveRis";
        case BaselineMode::kRandomTheta: return "RandomTheta";
        case BaselineMode::kAllAp: return "AllAp";
    }
    return "?";
}

BaselineMode mode_from_string(const std::string& name) {
    if (name == "Proposed") return BaselineMode::kProposed;
    if (name == "ActiveRis") return BaselineMode::kActiveRis;
    if (name == "PassiveRis") return BaselineMode::kPassiveRis;
    if (name == "RandomTheta") return BaselineMode::kRandomTheta;
    if (name == "AllAp") return BaselineMode::kAllAp;
    detail::require(false, "unknown mode '" + name + "'");
    return BaselineMode::kProposed;
}

double dinkelbach_residual(const IterationTrace& trace) {
    detail::require(!trace.records.empty(), "empty trace");
    return std::abs(trace.records.back().dinkelbach);
}

SystemConfig apply_mode(const SystemConfig& cfg, BaselineMode mode) {
    SystemConfig out = cfg;
    switch (mode) {
        case BaselineMode::kProposed:
        case BaselineMode::kRandomTheta:
            break;
        case BaselineMode::kActiveRis:
            out.active_elements = cfg.ris_elements;
            break;
        case BaselineMode::kPassiveRis:
            out.active_elements = 0;
            break;
        case BaselineMode::kAllAp:
            // the R surfaces become R extra APs; total transmit budget unchanged
            out.ap_power_max =
                cfg.ap_power_max * cfg.num_aps / (cfg.num_aps + cfg.num_ris);
            out.num_aps = cfg.num_aps + cfg.num_ris;
            out.num_ris = 0;
            out.active_elements = 0;
            break;
    }
    return out;
}

NetworkGeometry mode_geometry(const NetworkGeometry& geo, BaselineMode mode) {
    if (mode != BaselineMode::kAllAp) return geo;
    NetworkGeometry out;
    out.ap_positions = geo.ap_positions;
    out.ap_positions.insert(out.ap_positions.end(), geo.ris_positions.begin(),
                            geo.ris_positions.end());
    out.user_positions = geo.user_positions;
    return out;
}

namespace {

// Max-min rate restoration via the epigraph trick on the same QCQP solver:
// maximize t subject to linearized per-user SINR margins >= t (in noise
// units) and the transmit power budgets, re-linearizing until the true rates
// clear the floor.
bool restore_rate_feasibility(const ChannelSet& ch, const SystemConfig& cfg,
                              const RisState& ris, Beamformer& w) {
    const int users = ch.num_users();
    const int ants = ch.total_antennas();
    const double gamma_th = std::pow(2.0, cfg.min_rate) - 1.0;
    if (gamma_th <= 0.0) return true;

    CMat h(users, ants);
    RVec noise(users);
    for (int k = 0; k < users; ++k) {
        h.row(k) = effective_channel(ch, ris, k);
        noise(k) = ris_noise_power(ch, ris, k, cfg) + cfg.noise_user;
    }
    const VecPowerOperators ops = kron_power_operators(ch, ris, cfg);

    const Eigen::Index dim = static_cast<Eigen::Index>(users) * ants + 1;
    ConvexQcqp qp;
    qp.dim = dim;
    qp.linear = CVec::Zero(dim);
    qp.linear(dim - 1) = 0.5;  // objective: maximize the margin variable
    qp.real_coords.assign(static_cast<std::size_t>(dim), false);
    qp.real_coords[static_cast<std::size_t>(dim - 1)] = true;
    qp.magnitude_bound = RVec::Constant(dim, std::numeric_limits<double>::infinity());
    qp.magnitude_bound(dim - 1) = 1e9;

    auto head = [ants, users](const CVec& x) { return x.head(static_cast<Eigen::Index>(users) * ants); };

    for (int l = 0; l < cfg.num_aps; ++l) {
        QuadraticConstraint con;
        con.quadratic = [&ops, head, l, pmax = cfg.ap_power_max, dim](const CVec& x) {
            CVec out = CVec::Zero(dim);
            out.head(dim - 1) = ops.ap_apply(l, head(x)) / pmax;
            return out;
        };
        con.offset = -1.0;
        qp.constraints.push_back(std::move(con));
    }
    for (int r = 0; r < cfg.num_ris; ++r) {
        if (ops.amplified_rows[r].rows() == 0 && ops.noise_offset[r] == 0.0) continue;
        QuadraticConstraint con;
        con.quadratic = [&ops, head, r, pmax = cfg.ris_power_max, dim](const CVec& x) {
            CVec out = CVec::Zero(dim);
            out.head(dim - 1) = ops.ris_apply(r, head(x)) / pmax;
            return out;
        };
        con.offset = ops.noise_offset[r] / cfg.ris_power_max - 1.0;
        qp.constraints.push_back(std::move(con));
    }
    const std::size_t base_constraints = qp.constraints.size();

    auto min_margin = [&](const Beamformer& bf) {
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < users; ++k) {
            double interf = 0.0;
            double sig = 0.0;
            for (int j = 0; j < users; ++j) {
                const double p = std::norm(cplx(h.row(k) * bf.w.col(j)));
                if (j == k) {
                    sig = p;
                } else {
                    interf += p;
                }
            }
            worst = std::min(worst, sig - gamma_th * (interf + noise(k)));
        }
        return worst;
    };

    for (int round = 0; round < 20; ++round) {
        const double margin = min_margin(w);
        if (margin >= 0.0) return true;

        qp.constraints.resize(base_constraints);
        for (int k = 0; k < users; ++k) {
            const cplx alpha = cplx(h.row(k) * w.w.col(k));
            QuadraticConstraint con;
            con.quadratic = [&h, k, users, ants, gamma_th, dim,
                             s0 = cfg.noise_user](const CVec& x) {
                CVec out = CVec::Zero(dim);
                for (int j = 0; j < users; ++j) {
                    if (j == k) continue;
                    const Eigen::Index off = static_cast<Eigen::Index>(j) * ants;
                    const cplx inner = h.row(k).conjugate().dot(x.segment(off, ants));
                    out.segment(off, ants) += (gamma_th / s0 * inner) * h.row(k).adjoint();
                }
                return out;
            };
            con.linear = CVec::Zero(dim);
            con.linear.segment(static_cast<Eigen::Index>(k) * ants, ants) =
                -(alpha / cfg.noise_user) * h.row(k).adjoint();
            con.linear(dim - 1) = 0.5;  // + t, real coordinate
            con.offset = (std::norm(alpha) + gamma_th * noise(k)) / cfg.noise_user;
            qp.constraints.push_back(std::move(con));
        }

        CVec x0(dim);
        x0.head(dim - 1) = Eigen::Map<const CVec>(w.w.data(), dim - 1);
        x0(dim - 1) = cplx(margin / cfg.noise_user, 0.0);

        const SolveResult res = solve_qcqp(qp, x0, solver_options(cfg));
        if (res.feasibility > cfg.tol_feas) return false;
        Beamformer cand;
        cand.w = Eigen::Map<const CMat>(res.x.data(), ants, users);
        const double new_margin = min_margin(cand);
        if (new_margin <= margin + 1e-16) return false;  // stalled
        w = cand;
    }
    return min_margin(w) >= 0.0;
}

}  // namespace

InitState initialize(const ChannelSet& ch, const SystemConfig& cfg, BaselineMode mode,
                     std::uint64_t seed) {
    InitState st;
    st.ris.mask = build_selection_mask(cfg);
    const int n = cfg.total_elements();
    st.ris.coeffs = CVec::Zero(n);

    Rng rng(derive_seed(seed, kTagInit));
    // Active amplitude: as large as the RIS budget can absorb from its own
    // amplified noise alone, leaving headroom for the signal term.
    double active_amp = cfg.max_active_amplitude;
    if (cfg.active_elements > 0) {
        const double cap = std::sqrt(0.5 * cfg.amp_eff_ris * cfg.ris_power_max /
                                     (cfg.active_elements * cfg.noise_ris));
        active_amp = std::min(active_amp, cap);
    }

    // Element phases: cascade-aligned per element against direct-only
    // maximum-ratio beams, each element serving its strongest-coupled user.
    // The slack fixed point moves theta by only O(1/SINR) per round, so a
    // random-phase surface would stay essentially unused within any sane
    // iteration budget; RandomTheta keeps the random draw by definition.
    CVec phases = CVec::Ones(n);
    if (mode == BaselineMode::kRandomTheta) {
        for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, 2.0 * M_PI * rng.uniform());
    } else if (n > 0) {
        const int users = ch.num_users();
        CMat mr(ch.total_antennas(), users);
        RVec direct_phase(users);
        for (int k = 0; k < users; ++k) {
            const CVec dk = ch.direct.row(k).adjoint();
            mr.col(k) = (dk.norm() > 0.0) ? CVec(dk / dk.norm()) : CVec::Zero(dk.size());
            direct_phase(k) = std::arg(cplx(ch.direct.row(k) * mr.col(k)));
        }
        const CMat incident = ch.ap_ris * mr;  // N x K
        for (int i = 0; i < n; ++i) {
            int best_user = 0;
            double best_coupling = -1.0;
            for (int k = 0; k < users; ++k) {
                const double c = std::abs(ch.ris_user(k, i)) * std::abs(incident(i, k));
                if (c > best_coupling) {
                    best_coupling = c;
                    best_user = k;
                }
            }
            const cplx cascade = ch.ris_user(best_user, i) * incident(i, best_user);
            if (std::abs(cascade) > 0.0) {
                phases(i) = std::polar(1.0, direct_phase(best_user) - std::arg(cascade));
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        const double amp = st.ris.mask.active[i] ? active_amp : 1.0;
        st.ris.coeffs(i) = amp * phases(i);
    }

    // Maximum-ratio columns, scaled by the largest common factor that fits
    // every AP and RIS budget.
    const int users = ch.num_users();
    const int ants = ch.total_antennas();
    st.w.w.resize(ants, users);
    for (int k = 0; k < users; ++k) {
        const CVec hk = effective_channel(ch, st.ris, k).adjoint();
        const double nrm = hk.norm();
        st.w.w.col(k) = (nrm > 0.0) ? CVec(hk / nrm) : CVec::Zero(ants);
    }
    double scale2 = std::numeric_limits<double>::infinity();
    for (int l = 0; l < cfg.num_aps; ++l) {
        const double p = ap_tx_power(st.w, l, cfg);
        if (p > 0.0) scale2 = std::min(scale2, cfg.ap_power_max / p);
    }
    for (int r = 0; r < cfg.num_ris; ++r) {
        const double with_signal = ris_tx_power(ch, st.w, st.ris, r, cfg);
        Beamformer zero;
        zero.w = CMat::Zero(ants, users);
        const double noise_only = ris_tx_power(ch, zero, st.ris, r, cfg);
        const double signal_part = with_signal - noise_only;
        if (signal_part > 0.0) {
            scale2 = std::min(scale2, (cfg.ris_power_max - noise_only) / signal_part);
        }
    }
    if (!std::isfinite(scale2) || scale2 < 0.0) scale2 = 0.0;
    st.w.w *= std::sqrt(scale2) * 0.999;

    st.feasible = restore_rate_feasibility(ch, cfg, st.ris, st.w);
    if (!st.feasible) return st;

    st.slack.ee_ratio = update_ee_ratio(ch, st.w, st.ris, cfg);
    st.slack.sinr_est = update_sinr_estimates(ch, st.w, st.ris, cfg);
    st.slack.qt_weight = update_qt_weights(ch, st.w, st.ris, st.slack.sinr_est, cfg);
    return st;
}

OptimizeResult optimize(const ChannelSet& ch, const SystemConfig& cfg, BaselineMode mode,
                        std::uint64_t seed) {
    const auto t0 = std::chrono::steady_clock::now();
    OptimizeResult out;
    InitState st = initialize(ch, cfg, mode, seed);
    out.feasible = st.feasible;
    if (!st.feasible) {
        out.w = st.w;
        out.ris = st.ris;
        return out;
    }

    const bool update_theta = (mode == BaselineMode::kProposed ||
                               mode == BaselineMode::kActiveRis ||
                               mode == BaselineMode::kPassiveRis) &&
                              ch.total_elements() > 0;

    auto record = [&](int iter, double ratio_used) {
        IterationRecord rec;
        rec.iter = iter;
        rec.sum_rate = sum_rate(ch, st.w, st.ris, cfg);
        rec.power = total_power(ch, st.w, st.ris, cfg);
        rec.ee = rec.sum_rate / rec.power.total;
        rec.dinkelbach = rec.sum_rate - ratio_used * rec.power.total;
        rec.surrogate = surrogate_value(ch, st.w, st.ris, st.slack, cfg);
        rec.slack = st.slack;
        rec.max_violation = check_feasibility(ch, st.w, st.ris, cfg).max_violation();
        rec.wall_seconds = elapsed_seconds(t0);
        out.trace.records.push_back(std::move(rec));
        return out.trace.records.back().ee;
    };

    double prev_ee = record(0, st.slack.ee_ratio);

    for (int iter = 1; iter <= cfg.max_outer_iters; ++iter) {
        st.slack.ee_ratio = update_ee_ratio(ch, st.w, st.ris, cfg);
        // With sca_inner_rounds = 1 this is the literal one-update-per-block
        // stepping; extra rounds refresh the dual/QT slacks and re-expand the
        // SCA point at fixed Dinkelbach ratio, which keeps every step an
        // exact block maximization (ascent is preserved) but tracks the
        // parametric problem more closely per outer iteration.
        for (int round = 0; round < cfg.sca_inner_rounds; ++round) {
            st.slack.sinr_est = update_sinr_estimates(ch, st.w, st.ris, cfg);
            st.slack.qt_weight = update_qt_weights(ch, st.w, st.ris, st.slack.sinr_est, cfg);
            st.w = solve_beamforming(ch, st.ris, st.slack, st.w, cfg);
            if (update_theta) {
                st.ris = solve_ris(ch, st.w, st.slack, st.ris, cfg);
            }
        }

        const double ee = record(iter, st.slack.ee_ratio);
        const double rel_change = std::abs(ee - prev_ee) / std::max(prev_ee, 1e-300);
        prev_ee = ee;
        if (rel_change < cfg.tol_eta) break;
    }

    out.w = st.w;
    out.ris = st.ris;
    return out;
}

TrialResult run_trial(const SystemConfig& cfg, BaselineMode mode, std::uint64_t seed) {
    const ValidationReport vr = validate_config(cfg);
    detail::require(vr.ok(), vr.violations.empty() ? "invalid config"
                                                   : "invalid config: " + vr.violations.front());
    const SystemConfig run_cfg = apply_mode(cfg, mode);
    const NetworkGeometry geo = mode_geometry(place_nodes(cfg, seed), mode);
    const ChannelSet ch = synthesize_channels(run_cfg, geo, seed);

    OptimizeResult res = optimize(ch, run_cfg, mode, seed);

    TrialResult trial;
    trial.feasible = res.feasible;
    trial.trace = std::move(res.trace);
    trial.iterations = trial.trace.iterations();
    if (res.feasible) {
        trial.ee = trial.trace.records.back().ee;
        trial.sum_rate = trial.trace.records.back().sum_rate;
        trial.power = trial.trace.records.back().power;
        trial.user_rates.resize(run_cfg.num_users);
        for (int k = 0; k < run_cfg.num_users; ++k) {
            trial.user_rates(k) = user_rate(ch, res.w, res.ris, k, run_cfg);
        }
    } else {
        trial.user_rates = RVec::Zero(run_cfg.num_users);
        trial.power.ap_tx = RVec::Zero(run_cfg.num_aps);
        trial.power.ris_tx = RVec::Zero(run_cfg.num_ris);
        trial.power.circuit = circuit_power(run_cfg);
        trial.power.total = trial.power.circuit;
    }
    return trial;
}

}  // namespace cfris
