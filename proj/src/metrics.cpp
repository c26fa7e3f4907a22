#include "cfris/metrics.hpp"

#include <limits>

namespace cfris {

double FeasibilityReport::max_violation() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const RVec* part : {&ap_power, &ris_power, &active_amplitude, &passive_amplitude,
                             &rate}) {
        if (part->size() > 0) v = std::max(v, part->maxCoeff());
    }
    return v;
}

double ris_noise_power(const ChannelSet& ch, const RisState& ris, int k,
                       const SystemConfig& cfg) {
    double acc = 0.0;
    for (int n = 0; n < ch.total_elements(); ++n) {
        if (!ris.mask.active[n]) continue;
        acc += std::norm(ch.ris_user(k, n)) * std::norm(ris.coeffs(n));
    }
    return cfg.noise_ris * acc;
}

double sinr(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int k,
            const SystemConfig& cfg) {
    const Eigen::RowVectorXcd h = effective_channel(ch, ris, k);
    double signal = 0.0;
    double interference = 0.0;
    for (int j = 0; j < static_cast<int>(w.w.cols()); ++j) {
        const double p = std::norm(cplx(h * w.w.col(j)));
        if (j == k) {
            signal = p;
        } else {
            interference += p;
        }
    }
    return signal / (interference + ris_noise_power(ch, ris, k, cfg) + cfg.noise_user);
}

double user_rate(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int k,
                 const SystemConfig& cfg) {
    return std::log2(1.0 + sinr(ch, w, ris, k, cfg));
}

RVec all_sinrs(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
               const SystemConfig& cfg) {
    RVec out(ch.num_users());
    for (int k = 0; k < ch.num_users(); ++k) out(k) = sinr(ch, w, ris, k, cfg);
    return out;
}

double sum_rate(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                const SystemConfig& cfg) {
    double acc = 0.0;
    for (int k = 0; k < ch.num_users(); ++k) acc += user_rate(ch, w, ris, k, cfg);
    return acc;
}

double ap_tx_power(const Beamformer& w, int l, const SystemConfig& cfg) {
    return w.ap_block(l, cfg.ap_antennas).squaredNorm() / cfg.amp_eff_ap;
}

double ris_tx_power(const ChannelSet& ch, const Beamformer& w, const RisState& ris, int r,
                    const SystemConfig& cfg) {
    const int ns = cfg.ris_elements;
    const CMat incident = ch.ris_block(r, ns) * w.w;  // N_s x K
    double acc = 0.0;
    for (int n = 0; n < ns; ++n) {
        const int idx = r * ns + n;
        if (!ris.mask.active[idx]) continue;
        const double a2 = std::norm(ris.coeffs(idx));
        acc += a2 * (incident.row(n).squaredNorm() + cfg.noise_ris);
    }
    return acc / cfg.amp_eff_ris;
}

double circuit_power(const SystemConfig& cfg) {
    const double per_ris = cfg.active_elements * cfg.circuit_active +
                           (cfg.ris_elements - cfg.active_elements) * cfg.circuit_passive;
    return cfg.num_aps * cfg.circuit_ap + cfg.num_ris * per_ris +
           cfg.num_users * cfg.circuit_user;
}

PowerBreakdown total_power(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                           const SystemConfig& cfg) {
    PowerBreakdown out;
    out.ap_tx.resize(cfg.num_aps);
    for (int l = 0; l < cfg.num_aps; ++l) out.ap_tx(l) = ap_tx_power(w, l, cfg);
    out.ris_tx.resize(cfg.num_ris);
    for (int r = 0; r < cfg.num_ris; ++r) out.ris_tx(r) = ris_tx_power(ch, w, ris, r, cfg);
    out.circuit = circuit_power(cfg);
    out.total = out.ap_tx.sum() + out.ris_tx.sum() + out.circuit;
    return out;
}

double energy_efficiency(const ChannelSet& ch, const Beamformer& w, const RisState& ris,
                         const SystemConfig& cfg) {
    return sum_rate(ch, w, ris, cfg) / total_power(ch, w, ris, cfg).total;
}

FeasibilityReport check_feasibility(const ChannelSet& ch, const Beamformer& w,
                                    const RisState& ris, const SystemConfig& cfg) {
    FeasibilityReport rep;
    rep.ap_power.resize(cfg.num_aps);
    for (int l = 0; l < cfg.num_aps; ++l) {
        rep.ap_power(l) = ap_tx_power(w, l, cfg) - cfg.ap_power_max;
    }
    rep.ris_power.resize(cfg.num_ris);
    for (int r = 0; r < cfg.num_ris; ++r) {
        rep.ris_power(r) = ris_tx_power(ch, w, ris, r, cfg) - cfg.ris_power_max;
    }

    const int n_active = ris.mask.count_active();
    rep.active_amplitude.resize(n_active);
    rep.passive_amplitude.resize(ch.total_elements() - n_active);
    int ia = 0, ip = 0;
    for (int n = 0; n < ch.total_elements(); ++n) {
        const double amp = std::abs(ris.coeffs(n));
        if (ris.mask.active[n]) {
            rep.active_amplitude(ia++) = amp - cfg.max_active_amplitude;
        } else {
            rep.passive_amplitude(ip++) = amp - 1.0;
        }
    }

    rep.rate.resize(ch.num_users());
    for (int k = 0; k < ch.num_users(); ++k) {
        rep.rate(k) = cfg.min_rate - user_rate(ch, w, ris, k, cfg);
    }
    return rep;
}

}  // namespace cfris
