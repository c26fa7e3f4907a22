#include <doctest.h>

#include <cstdio>

#include "cfris/metrics.hpp"
#include "oracles.hpp"

using namespace cfris;

TEST_CASE("path gain follows the reference-distance law") {
    SystemConfig cfg;
    cfg.ref_gain = 1e-3;
    cfg.ref_distance = 1.0;
    CHECK(path_gain(10.0, 2.0, cfg) == doctest::Approx(1e-5).epsilon(1e-12));
    CHECK(path_gain(1.0, 2.8, cfg) == doctest::Approx(1e-3).epsilon(1e-12));

    // independent dB-domain computation: -30 - 2.8 * 20 dB at 100 m
    const double db = linear_to_db(path_gain(100.0, 2.8, cfg));
    CHECK(db == doctest::Approx(-86.0).epsilon(1e-9));
}

TEST_CASE("sub-reference distances clamp and get counted") {
    SystemConfig cfg;
    PathGainStats stats;
    const double g = path_gain(0.2, 2.8, cfg, &stats);
    CHECK(g == doctest::Approx(cfg.ref_gain));
    CHECK(stats.clamped_below_ref == 1);
}

TEST_CASE("LOS-only limit has constant-magnitude entries") {
    Rng rng(1);
    const double gain = 4.0;
    const CMat h = rician_link(3, 5, gain, 1e9, rng, {0.3, -0.6, 1.0});
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            CHECK(std::abs(h(i, j)) == doctest::Approx(std::sqrt(gain)).epsilon(1e-3));
        }
    }
}

TEST_CASE("unit second moment of Rician entries") {
    Rng rng(2);
    const CMat h = rician_link(400, 500, 1.0, 1.0, rng, {0.1, 0.2, 0.0});
    const double mean_sq = h.squaredNorm() / static_cast<double>(h.size());
    CHECK(mean_sq == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("empirical link power matches the path gain") {
    Rng rng(3);
    const double gain = 3.7;
    const CMat h = rician_link(400, 300, gain, 2.0, rng, {0.4, -0.2, 1.3});
    const double mean_sq = h.squaredNorm() / static_cast<double>(h.size());
    CHECK(mean_sq == doctest::Approx(gain).epsilon(0.01));
}

TEST_CASE("LOS/NLOS mixing weights at 3 dB Rician factor") {
    // beta = 2: the deterministic part carries sqrt(2/3) of the amplitude
    const double beta = 2.0;
    const LosSpec los{0.25, -0.75, 0.9};
    Rng rng(4);
    const int draws = 200000;
    cplx mean = 0.0;
    for (int i = 0; i < draws; ++i) {
        mean += rician_link(1, 1, 1.0, beta, rng, los)(0, 0);
    }
    mean /= static_cast<double>(draws);
    const cplx los_entry =
        std::polar(1.0, los.phase) * std::polar(1.0, 0.0) * std::conj(std::polar(1.0, 0.0));
    const cplx expect = std::sqrt(beta / (1.0 + beta)) * los_entry;
    // MC noise ~ sqrt(1/(3 draws)) per axis
    CHECK(std::abs(mean - expect) < 5.0 * std::sqrt(1.0 / (3.0 * draws)));
}

TEST_CASE("stacked channel dimensions") {
    SystemConfig cfg;
    cfg.num_aps = 1;
    cfg.num_ris = 1;
    cfg.num_users = 1;
    cfg.ap_antennas = 6;
    cfg.ris_elements = 8;
    cfg.active_elements = 2;
    const NetworkGeometry geo = place_nodes(cfg, 1);
    const ChannelSet ch = synthesize_channels(cfg, geo, 1);
    CHECK(ch.direct.rows() == 1);
    CHECK(ch.direct.cols() == 6);
    CHECK(ch.ap_ris.rows() == 8);
    CHECK(ch.ap_ris.cols() == 6);
    CHECK(ch.ris_user.rows() == 1);
    CHECK(ch.ris_user.cols() == 8);
}

TEST_CASE("same seed gives a bitwise-identical channel set") {
    const SystemConfig cfg = default_ci_config();
    const NetworkGeometry geo = place_nodes(cfg, 11);
    const ChannelSet a = synthesize_channels(cfg, geo, 11);
    const ChannelSet b = synthesize_channels(cfg, geo, 11);
    CHECK(a.direct == b.direct);
    CHECK(a.ap_ris == b.ap_ris);
    CHECK(a.ris_user == b.ris_user);
}

TEST_CASE("each block of the stacked AP-RIS matrix is its own link draw") {
    SystemConfig cfg = default_ci_config();
    cfg.num_aps = 2;
    cfg.num_ris = 2;
    const NetworkGeometry geo = place_nodes(cfg, 9);
    const ChannelSet ch = synthesize_channels(cfg, geo, 9);

    // regenerate block (r=1, l=0) from its own substream
    const int l = 0, r = 1;
    const double d = (geo.ris_positions[r] - geo.ap_positions[l]).norm();
    const double g = path_gain(d, cfg.pl_exp_ap_ris, cfg);
    Rng rng(link_seed(9, LinkKind::kApRis, l, r));
    const CMat block = rician_link(cfg.ris_elements, cfg.ap_antennas, g, cfg.rician_factor,
                                   rng, los_between(geo.ap_positions[l], geo.ris_positions[r]));
    CHECK(block == ch.ap_ris.block(r * cfg.ris_elements, l * cfg.ap_antennas,
                                   cfg.ris_elements, cfg.ap_antennas));
}

TEST_CASE("effective channel with zero coefficients is the direct channel") {
    const auto s = oracle::make_synthetic(21);
    RisState off = s.ris;
    off.coeffs.setZero();
    for (int k = 0; k < s.cfg.num_users; ++k) {
        CHECK(effective_channel(s.ch, off, k) == Eigen::RowVectorXcd(s.ch.direct.row(k)));
    }
}

TEST_CASE("scalar cascade by hand") {
    ChannelSet ch;
    ch.direct = CMat::Constant(1, 1, cplx(1.0, 0.0));
    ch.ap_ris = CMat::Constant(1, 1, cplx(2.0, 0.0));
    ch.ris_user = CMat::Constant(1, 1, cplx(1.0, 0.0));
    RisState ris;
    ris.coeffs = CVec::Constant(1, cplx(0.5, 0.0));
    ris.mask.active = {false};
    const Eigen::RowVectorXcd h = effective_channel(ch, ris, 0);
    CHECK(h(0).real() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(h(0).imag() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("effective channel equals the unstacked per-link sum") {
    for (std::uint64_t seed : {31u, 32u, 33u, 34u}) {
        const auto s = oracle::make_synthetic(seed, 3, 2, 2, 4, 3, 2);
        for (int k = 0; k < s.cfg.num_users; ++k) {
            const Eigen::RowVectorXcd fast = effective_channel(s.ch, s.ris, k);
            const Eigen::RowVectorXcd slow =
                oracle::unstacked_effective_channel(s.ch, s.ris, k, s.cfg);
            CHECK((fast - slow).norm() <= 1e-12 * slow.norm());
        }
    }
}

TEST_CASE("channel fixture round trip") {
    const SystemConfig cfg = default_ci_config();
    const NetworkGeometry geo = place_nodes(cfg, 13);
    const ChannelSet ch = synthesize_channels(cfg, geo, 13);
    const std::string path = "/tmp/cfris_channel_fixture.txt";
    save_channels(ch, path);
    const ChannelSet back = load_channels(path);
    CHECK(back.direct == ch.direct);
    CHECK(back.ap_ris == ch.ap_ris);
    CHECK(back.ris_user == ch.ris_user);
    std::remove(path.c_str());
    CHECK_THROWS_AS((void)load_channels("/tmp/not_a_channel_fixture"), std::invalid_argument);
}
