#include "cfris/channel.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfris/metrics.hpp"

namespace cfris {

namespace {

constexpr std::uint64_t kTagDirect = 0x64697265u;   // AP -> user links
constexpr std::uint64_t kTagApRis = 0x61707273u;    // AP -> RIS links
constexpr std::uint64_t kTagRisUser = 0x72697573u;  // RIS -> user links

// implicit carrier reference for the deterministic bulk LOS phase
constexpr double kLosWavelength = 0.1;

CVec steering(int dim, double spatial_freq) {
    CVec a(dim);
    for (int m = 0; m < dim; ++m) {
        a(m) = std::polar(1.0, M_PI * m * spatial_freq);
    }
    return a;
}

}  // namespace

LosSpec los_between(const Eigen::Vector2d& tx, const Eigen::Vector2d& rx) {
    const Eigen::Vector2d d = rx - tx;
    const double az = std::atan2(d.y(), d.x());
    LosSpec los;
    los.tx_spatial_freq = std::cos(az);
    los.rx_spatial_freq = -std::cos(az);  // arrival direction is the reverse azimuth
    const double dist = d.norm();
    los.phase = 2.0 * M_PI * std::fmod(dist / kLosWavelength, 1.0);
    return los;
}

std::uint64_t link_seed(std::uint64_t seed, LinkKind kind, int a, int b) {
    std::uint64_t tag = 0;
    switch (kind) {
        case LinkKind::kDirect: tag = kTagDirect; break;
        case LinkKind::kApRis: tag = kTagApRis; break;
        case LinkKind::kRisUser: tag = kTagRisUser; break;
    }
    return derive_seed(seed, tag, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
}

double path_gain(double distance, double exponent, const SystemConfig& cfg,
                 PathGainStats* stats) {
    double d = distance;
    if (d < cfg.ref_distance) {
        d = cfg.ref_distance;
        if (stats != nullptr) ++stats->clamped_below_ref;
    }
    return cfg.ref_gain * std::pow(d / cfg.ref_distance, -exponent);
}

CMat rician_link(int rx_dim, int tx_dim, double gain, double beta, Rng& rng,
                 const LosSpec& los) {
    const double w_los = std::sqrt(beta / (1.0 + beta));
    const double w_nlos = std::sqrt(1.0 / (1.0 + beta));
    const double amp = std::sqrt(gain);

    const CVec a_rx = steering(rx_dim, los.rx_spatial_freq);
    const CVec a_tx = steering(tx_dim, los.tx_spatial_freq);
    const cplx bulk = std::polar(1.0, los.phase);

    CMat h(rx_dim, tx_dim);
    for (int i = 0; i < rx_dim; ++i) {
        for (int j = 0; j < tx_dim; ++j) {
            const cplx los_entry = bulk * a_rx(i) * std::conj(a_tx(j));
            h(i, j) = amp * (w_los * los_entry + w_nlos * rng.cnormal());
        }
    }
    return h;
}

ChannelSet synthesize_channels(const SystemConfig& cfg, const NetworkGeometry& geometry,
                               std::uint64_t seed, PathGainStats* stats) {
    detail::require(static_cast<int>(geometry.ap_positions.size()) == cfg.num_aps &&
                        static_cast<int>(geometry.ris_positions.size()) == cfg.num_ris &&
                        static_cast<int>(geometry.user_positions.size()) == cfg.num_users,
                    "geometry does not match config");

    const int nt = cfg.ap_antennas;
    const int ns = cfg.ris_elements;
    ChannelSet ch;
    ch.direct = CMat::Zero(cfg.num_users, cfg.total_antennas());
    ch.ap_ris = CMat::Zero(cfg.total_elements(), cfg.total_antennas());
    ch.ris_user = CMat::Zero(cfg.num_users, cfg.total_elements());

    for (int l = 0; l < cfg.num_aps; ++l) {
        for (int k = 0; k < cfg.num_users; ++k) {
            const double d = (geometry.user_positions[k] - geometry.ap_positions[l]).norm();
            const double g = path_gain(d, cfg.pl_exp_direct, cfg, stats);
            Rng rng(link_seed(seed, LinkKind::kDirect, l, k));
            ch.direct.block(k, l * nt, 1, nt) =
                rician_link(1, nt, g, cfg.rician_factor, rng,
                            los_between(geometry.ap_positions[l], geometry.user_positions[k]));
        }
        for (int r = 0; r < cfg.num_ris; ++r) {
            const double d = (geometry.ris_positions[r] - geometry.ap_positions[l]).norm();
            const double g = path_gain(d, cfg.pl_exp_ap_ris, cfg, stats);
            Rng rng(link_seed(seed, LinkKind::kApRis, l, r));
            ch.ap_ris.block(r * ns, l * nt, ns, nt) =
                rician_link(ns, nt, g, cfg.rician_factor, rng,
                            los_between(geometry.ap_positions[l], geometry.ris_positions[r]));
        }
    }
    for (int r = 0; r < cfg.num_ris; ++r) {
        for (int k = 0; k < cfg.num_users; ++k) {
            const double d = (geometry.user_positions[k] - geometry.ris_positions[r]).norm();
            const double g = path_gain(d, cfg.pl_exp_ris_user, cfg, stats);
            Rng rng(link_seed(seed, LinkKind::kRisUser, r, k));
            ch.ris_user.block(k, r * ns, 1, ns) =
                rician_link(1, ns, g, cfg.rician_factor, rng,
                            los_between(geometry.ris_positions[r], geometry.user_positions[k]));
        }
    }
    return ch;
}

Eigen::RowVectorXcd effective_channel(const ChannelSet& ch, const RisState& ris, int k) {
    Eigen::RowVectorXcd row = ch.direct.row(k);
    if (ch.total_elements() > 0) {
        // theta^H diag(f_k^H) G with theta the conjugate of the physical
        // coefficients, i.e. the cascaded row f_k^H Theta G.
        row += (ris.coeffs.transpose().cwiseProduct(ch.ris_user.row(k))) * ch.ap_ris;
    }
    return row;
}

namespace {

void write_matrix(std::FILE* f, const CMat& m) {
    std::fprintf(f, "%" PRIdMAX " %" PRIdMAX "\n", static_cast<std::intmax_t>(m.rows()),
                 static_cast<std::intmax_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::fprintf(f, "%.17g %.17g\n", m(i, j).real(), m(i, j).imag());
        }
    }
}

CMat read_matrix(std::istream& in) {
    Eigen::Index rows = 0, cols = 0;
    detail::require(static_cast<bool>(in >> rows >> cols), "channel fixture: bad header");
    CMat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            double re = 0.0, im = 0.0;
            detail::require(static_cast<bool>(in >> re >> im),
                            "channel fixture: truncated matrix data");
            m(i, j) = cplx(re, im);
        }
    }
    return m;
}

}  // namespace

void save_channels(const ChannelSet& ch, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    detail::require(f != nullptr, "cannot open '" + path + "' for writing");
    std::fprintf(f, "cfris-channelset 1\n");
    write_matrix(f, ch.direct);
    write_matrix(f, ch.ap_ris);
    write_matrix(f, ch.ris_user);
    std::fclose(f);
}

ChannelSet load_channels(const std::string& path) {
    std::ifstream in(path);
    detail::require(in.good(), "cannot open channel fixture '" + path + "'");
    std::string magic;
    int version = 0;
    detail::require(static_cast<bool>(in >> magic >> version) && magic == "cfris-channelset" &&
                        version == 1,
                    "not a channel fixture: '" + path + "'");
    ChannelSet ch;
    ch.direct = read_matrix(in);
    ch.ap_ris = read_matrix(in);
    ch.ris_user = read_matrix(in);
    return ch;
}

}  // namespace cfris
