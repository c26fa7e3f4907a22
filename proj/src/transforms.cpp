#include "cfris/transforms.hpp"

namespace cfris {

CVec theta_vector(const RisState& ris) { return ris.coeffs.conjugate(); }

double update_ee_ratio(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const SystemConfig& cfg) {
    return energy_efficiency(ch, w, ris, cfg);
}

RVec update_sinr_estimates(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                           const SystemConfig& cfg) {
    return all_sinrs(ch, w, ris, cfg);
}

CVec update_qt_weights(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const RVec& sinr_est, const SystemConfig& cfg) {
    const int users = ch.num_users();
    CVec rho(users);
    for (int k = 0; k < users; ++k) {
        const Eigen::RowVectorXcd h = effective_channel(ch, ris, k);
        double denom = ris_noise_power(ch, ris, k, cfg) + cfg.noise_user;
        cplx signal = 0.0;
        for (int j = 0; j < users; ++j) {
            const cplx hw = h * w.w.col(j);
            denom += std::norm(hw);
            if (j == k) signal = hw;
        }
        rho(k) = std::sqrt(1.0 + sinr_est(k)) * signal / denom;
    }
    return rho;
}

double dinkelbach_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                        double ee_ratio, const SystemConfig& cfg) {
    return sum_rate(ch, w, ris, cfg) - ee_ratio * total_power(ch, w, ris, cfg).total;
}

double dual_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                  const SlackState& slack, const SystemConfig& cfg) {
    double acc = 0.0;
    for (int k = 0; k < ch.num_users(); ++k) {
        const double g = sinr(ch, w, ris, k, cfg);
        const double e = slack.sinr_est(k);
        acc += std::log(1.0 + e) - e + (1.0 + e) * g / (1.0 + g);
    }
    return acc - slack.ee_ratio * kLn2 * total_power(ch, w, ris, cfg).total;
}

double surrogate_value(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                       const SlackState& slack, const SystemConfig& cfg) {
    double acc = 0.0;
    for (int k = 0; k < ch.num_users(); ++k) {
        const Eigen::RowVectorXcd h = effective_channel(ch, ris, k);
        double denom = ris_noise_power(ch, ris, k, cfg) + cfg.noise_user;
        cplx signal = 0.0;
        for (int j = 0; j < ch.num_users(); ++j) {
            const cplx hw = h * w.w.col(j);
            denom += std::norm(hw);
            if (j == k) signal = hw;
        }
        const cplx rho = slack.qt_weight(k);
        acc += 2.0 * std::sqrt(1.0 + slack.sinr_est(k)) * std::real(std::conj(rho) * signal) -
               std::norm(rho) * denom;
    }
    return acc - slack.ee_ratio * kLn2 * total_power(ch, w, ris, cfg).total;
}

QuadraticForms build_quadratic_forms(const ChannelSet& ch, const Beamformer& w,
                                     const RisState& ris, const SystemConfig& cfg) {
    QuadraticForms qf;
    qf.users = ch.num_users();
    qf.elements = ch.total_elements();
    qf.v.resize(static_cast<std::size_t>(qf.users) * qf.users);
    qf.s.resize(static_cast<std::size_t>(qf.users) * qf.users);
    qf.noise_diag.resize(qf.users);
    qf.power_diag.resize(cfg.num_ris);

    const CMat gw = ch.ap_ris * w.w;  // N x K, column j = G w_j
    for (int k = 0; k < qf.users; ++k) {
        for (int j = 0; j < qf.users; ++j) {
            qf.v[k * qf.users + j] =
                gw.col(j).cwiseProduct(ch.ris_user.row(k).transpose());
            qf.s[k * qf.users + j] = ch.direct.row(k) * w.w.col(j);
        }
        RVec nd = RVec::Zero(qf.elements);
        for (int n = 0; n < qf.elements; ++n) {
            if (ris.mask.active[n]) nd(n) = cfg.noise_ris * std::norm(ch.ris_user(k, n));
        }
        qf.noise_diag[k] = std::move(nd);
    }
    for (int r = 0; r < cfg.num_ris; ++r) {
        qf.power_diag[r] = gw.middleRows(static_cast<Eigen::Index>(r) * cfg.ris_elements,
                                         cfg.ris_elements)
                               .rowwise()
                               .squaredNorm();
    }
    return qf;
}

double surrogate_value_theta(const ChannelSet& ch, const CVec& theta,
                             const SelectionMask& mask, const Beamformer& w_prev,
                             const SlackState& slack, const SystemConfig& cfg) {
    RisState probe{theta.conjugate(), mask};
    const QuadraticForms qf = build_quadratic_forms(ch, w_prev, probe, cfg);
    const int users = ch.num_users();

    double acc = 0.0;
    for (int k = 0; k < users; ++k) {
        const cplx rho = slack.qt_weight(k);
        const cplx sig = qf.s_at(k, k) + theta.dot(qf.v_at(k, k));
        acc += 2.0 * std::sqrt(1.0 + slack.sinr_est(k)) * std::real(std::conj(rho) * sig);

        double denom = cfg.noise_user;
        for (int j = 0; j < users; ++j) {
            const cplx hw = qf.s_at(k, j) + theta.dot(qf.v_at(k, j));
            denom += std::norm(hw);
        }
        for (int n = 0; n < qf.elements; ++n) {
            denom += qf.noise_diag[k](n) * std::norm(theta(n));
        }
        acc -= std::norm(rho) * denom;
    }

    // power at fixed beamformer: RIS transmit power as a theta-quadratic,
    // AP transmit power and circuit power constant
    double power = circuit_power(cfg);
    for (int l = 0; l < cfg.num_aps; ++l) power += ap_tx_power(w_prev, l, cfg);
    for (int r = 0; r < cfg.num_ris; ++r) {
        double p = 0.0;
        for (int n = 0; n < cfg.ris_elements; ++n) {
            const int idx = r * cfg.ris_elements + n;
            if (!mask.active[idx]) continue;
            p += (qf.power_diag[r](n) + cfg.noise_ris) * std::norm(theta(idx));
        }
        power += p / cfg.amp_eff_ris;
    }
    return acc - slack.ee_ratio * kLn2 * power;
}

CVec VecPowerOperators::ap_apply(int l, const CVec& x) const {
    CVec out = CVec::Zero(x.size());
    for (int j = 0; j < users; ++j) {
        const Eigen::Index off =
            static_cast<Eigen::Index>(j) * total_antennas + static_cast<Eigen::Index>(l) * ap_antennas;
        out.segment(off, ap_antennas) = x.segment(off, ap_antennas) / mu_ap;
    }
    return out;
}

double VecPowerOperators::ap_value(int l, const CVec& x) const {
    double acc = 0.0;
    for (int j = 0; j < users; ++j) {
        const Eigen::Index off =
            static_cast<Eigen::Index>(j) * total_antennas + static_cast<Eigen::Index>(l) * ap_antennas;
        acc += x.segment(off, ap_antennas).squaredNorm();
    }
    return acc / mu_ap;
}

CVec VecPowerOperators::ris_apply(int r, const CVec& x) const {
    CVec out = CVec::Zero(x.size());
    const CMat& rows = amplified_rows[r];
    if (rows.rows() == 0) return out;
    for (int j = 0; j < users; ++j) {
        const Eigen::Index off = static_cast<Eigen::Index>(j) * total_antennas;
        const auto col = x.segment(off, total_antennas);
        out.segment(off, total_antennas) = rows.adjoint() * (rows * col) / mu_ris;
    }
    return out;
}

double VecPowerOperators::ris_value(int r, const CVec& x) const {
    double acc = noise_offset[r];
    const CMat& rows = amplified_rows[r];
    if (rows.rows() > 0) {
        for (int j = 0; j < users; ++j) {
            const Eigen::Index off = static_cast<Eigen::Index>(j) * total_antennas;
            acc += (rows * x.segment(off, total_antennas)).squaredNorm() / mu_ris;
        }
    }
    return acc;
}

VecPowerOperators kron_power_operators(const ChannelSet& ch, const RisState& ris,
                                       const SystemConfig& cfg) {
    VecPowerOperators ops;
    ops.total_antennas = ch.total_antennas();
    ops.users = ch.num_users();
    ops.ap_antennas = cfg.ap_antennas;
    ops.mu_ap = cfg.amp_eff_ap;
    ops.mu_ris = cfg.amp_eff_ris;
    ops.amplified_rows.resize(cfg.num_ris);
    ops.noise_offset.resize(cfg.num_ris);

    for (int r = 0; r < cfg.num_ris; ++r) {
        std::vector<int> active;
        double kappa = 0.0;
        for (int n = 0; n < cfg.ris_elements; ++n) {
            const int idx = r * cfg.ris_elements + n;
            if (!ris.mask.active[idx]) continue;
            active.push_back(n);
            kappa += cfg.noise_ris * std::norm(ris.coeffs(idx));
        }
        CMat rows(static_cast<Eigen::Index>(active.size()), ch.total_antennas());
        for (std::size_t i = 0; i < active.size(); ++i) {
            const int idx = r * cfg.ris_elements + active[i];
            rows.row(static_cast<Eigen::Index>(i)) =
                ris.coeffs(idx) * ch.ap_ris.row(idx);
        }
        ops.amplified_rows[r] = std::move(rows);
        ops.noise_offset[r] = kappa / cfg.amp_eff_ris;
    }
    return ops;
}

}  // namespace cfris
