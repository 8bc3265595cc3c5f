#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "rcf/analog_bf.hpp"
#include "rcf/channel.hpp"
#include "rcf/rng.hpp"

using namespace rcf;

TEST_CASE("generate_topology is deterministic and respects radii") {
    SystemConfig cfg;
    const Topology a = generate_topology(cfg, 42);
    const Topology b = generate_topology(cfg, 42);
    REQUIRE(a.bs_positions.size() == static_cast<std::size_t>(cfg.n_bs));
    REQUIRE(a.ris_positions.size() == static_cast<std::size_t>(cfg.n_ris));
    REQUIRE(a.user_positions.size() == static_cast<std::size_t>(cfg.n_users));
    for (std::size_t i = 0; i < a.bs_positions.size(); ++i) {
        CHECK(a.bs_positions[i].x == b.bs_positions[i].x);
        CHECK(a.bs_positions[i].y == b.bs_positions[i].y);
        CHECK(std::hypot(a.bs_positions[i].x, a.bs_positions[i].y) <=
              cfg.bs_radius_m);
    }
    for (const Vec2& u : a.user_positions) {
        CHECK(std::hypot(u.x, u.y) <= cfg.user_radius_m);
    }
}

TEST_CASE("generate_topology: zero user radius pins users to the origin") {
    SystemConfig cfg;
    cfg.n_users = 1;
    cfg.user_radius_m = 0.0;
    const Topology t = generate_topology(cfg, 7);
    CHECK(t.user_positions[0].x == 0.0);
    CHECK(t.user_positions[0].y == 0.0);
}

TEST_CASE("generate_topology: squared radius is uniform (KS test)") {
    // r^2 / R^2 must be Uniform(0,1) for uniform-in-disc placement.
    SystemConfig cfg;
    cfg.n_bs = 10000;
    cfg.n_users = 1;
    cfg.n_ris = 0;
    const Topology t = generate_topology(cfg, 11);
    std::vector<double> u;
    u.reserve(t.bs_positions.size());
    for (const Vec2& p : t.bs_positions) {
        const double r2 = (p.x * p.x + p.y * p.y) /
                          (cfg.bs_radius_m * cfg.bs_radius_m);
        u.push_back(r2);
    }
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    const double n = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        ks = std::max({ks, std::abs(u[i] - lo), std::abs(u[i] - hi)});
    }
    CHECK(ks < 0.02);
}

TEST_CASE("path_loss_linear: frozen reference values") {
    // 28 + 22 log10(d) + 20 log10(5.9) at d = 1 m and d = 100 m.
    const double f = 5.9e9;
    const double pl1_db = -10.0 * std::log10(path_loss_linear(1.0, f));
    CHECK(pl1_db == doctest::Approx(43.417040232842884).epsilon(1e-12));
    const double pl100_db = -10.0 * std::log10(path_loss_linear(100.0, f));
    CHECK(pl100_db == doctest::Approx(87.417040232842884).epsilon(1e-12));

    CHECK(path_loss_linear(200.0, f) < path_loss_linear(100.0, f));
    // Sub-metre distances clamp to 1 m.
    CHECK(path_loss_linear(0.2, f) == path_loss_linear(1.0, f));
}

namespace {

SystemConfig tiny_cfg() {
    SystemConfig cfg;
    cfg.n_bs = 1;
    cfg.n_ant = 1;
    cfg.n_users = 1;
    cfg.n_ris = 1;
    cfg.ris_elements = 1;
    cfg.phase_bits = 1;
    return cfg;
}

}  // namespace

TEST_CASE("generate_channels: pure line-of-sight limit") {
    SystemConfig cfg = tiny_cfg();
    cfg.rician_kappa = 1e12;
    const Topology topo = generate_topology(cfg, 3);
    const ChannelSet ch = generate_channels(topo, cfg, 3);
    const double d = dist(bs_antenna_positions(topo.bs_positions[0], 1, 1.0)[0],
                          topo.user_positions[0]);
    const double g = path_loss_linear(d, cfg.carrier_hz);
    CHECK(std::abs(ch.h_d.at(0, 0)) ==
          doctest::Approx(std::sqrt(g)).epsilon(1e-4));
}

TEST_CASE("generate_channels: zero-mean scatter at kappa = 0") {
    SystemConfig cfg = tiny_cfg();
    cfg.rician_kappa = 0.0;
    const Topology topo = generate_topology(cfg, 5);
    const double d = dist(bs_antenna_positions(topo.bs_positions[0], 1, 1.0)[0],
                          topo.user_positions[0]);
    const double g = path_loss_linear(d, cfg.carrier_hz);
    cx mean{0.0, 0.0};
    const int n_draws = 100000;
    for (int i = 0; i < n_draws; ++i) {
        const ChannelSet ch =
            generate_channels(topo, cfg, static_cast<std::uint64_t>(i));
        mean += ch.h_d.at(0, 0);
    }
    mean /= static_cast<double>(n_draws);
    CHECK(std::abs(mean) < 0.02 * std::sqrt(g));
}

TEST_CASE("generate_channels: Rician normalization E|h|^2 = g at kappa = 4") {
    SystemConfig cfg = tiny_cfg();
    cfg.rician_kappa = 4.0;
    const Topology topo = generate_topology(cfg, 9);
    const double d = dist(bs_antenna_positions(topo.bs_positions[0], 1, 1.0)[0],
                          topo.user_positions[0]);
    const double g = path_loss_linear(d, cfg.carrier_hz);
    double acc = 0.0;
    const int n_draws = 100000;
    for (int i = 0; i < n_draws; ++i) {
        const ChannelSet ch =
            generate_channels(topo, cfg, static_cast<std::uint64_t>(i));
        acc += std::norm(ch.h_d.at(0, 0));
    }
    acc /= static_cast<double>(n_draws);
    CHECK(acc == doctest::Approx(g).epsilon(0.02));
}

TEST_CASE("generate_channels: same seed gives bit-identical channels") {
    SystemConfig cfg;
    cfg.n_ris = 2;
    cfg.ris_elements = 4;
    const Topology topo = generate_topology(cfg, 21);
    const ChannelSet a = generate_channels(topo, cfg, 21);
    const ChannelSet b = generate_channels(topo, cfg, 21);
    CHECK(a.h_d.data() == b.h_d.data());
    CHECK(a.h_br.data() == b.h_br.data());
    CHECK(a.h_ru_h.data() == b.h_ru_h.data());
}

TEST_CASE("generate_channels: adding users keeps existing substreams intact") {
    SystemConfig cfg;
    cfg.n_ris = 1;
    cfg.ris_elements = 4;
    SystemConfig bigger = cfg;
    bigger.n_users = cfg.n_users + 2;
    Topology t1 = generate_topology(cfg, 33);
    Topology t2 = generate_topology(bigger, 33);
    for (int i = 0; i < cfg.n_users; ++i) {
        CHECK(t1.user_positions[static_cast<std::size_t>(i)].x ==
              t2.user_positions[static_cast<std::size_t>(i)].x);
    }
    const ChannelSet c1 = generate_channels(t1, cfg, 33);
    const ChannelSet c2 = generate_channels(t2, bigger, 33);
    for (int t = 0; t < c1.h_d.cols(); ++t) {
        CHECK(c1.h_d.at(0, t) == c2.h_d.at(0, t));
    }
    for (int j = 0; j < c1.h_br.rows(); ++j) {
        CHECK(c1.h_br.at(j, 0) == c2.h_br.at(j, 0));
    }
}

namespace {

ChannelSet random_channelset(std::uint64_t seed, int k, int ml, int t) {
    SubstreamRng rng(seed, SubstreamRng::Generic, 1);
    ChannelSet ch;
    ch.h_d = CMat(k, t);
    ch.h_br = CMat(ml, t);
    ch.h_ru_h = CMat(k, ml);
    for (auto& v : ch.h_d.data()) v = rng.next_cnormal();
    for (auto& v : ch.h_br.data()) v = rng.next_cnormal();
    for (auto& v : ch.h_ru_h.data()) v = rng.next_cnormal();
    return ch;
}

}  // namespace

TEST_CASE("effective_channel: zero reflection returns the direct block") {
    ChannelSet ch = random_channelset(50, 3, 4, 5);
    for (auto& v : ch.h_ru_h.data()) v = cx{0.0, 0.0};
    const std::vector<cx> q(4, cx{1.0, 0.0});
    const CMat h = effective_channel(ch, q);
    for (std::size_t i = 0; i < h.data().size(); ++i) {
        CHECK(h.data()[i] == ch.h_d.data()[i]);
    }
}

TEST_CASE("effective_channel: single-element scalar chain") {
    ChannelSet ch = random_channelset(51, 1, 1, 1);
    const double theta = 1.234;
    const std::vector<cx> q{cx{std::cos(theta), std::sin(theta)}};
    const CMat h = effective_channel(ch, q);
    const cx want = ch.h_d.at(0, 0) + ch.h_ru_h.at(0, 0) * q[0] * ch.h_br.at(0, 0);
    CHECK(std::abs(h.at(0, 0) - want) < 1e-15);
}

TEST_CASE("effective_channel matches the brute-force triple loop") {
    const ChannelSet ch = random_channelset(52, 4, 6, 5);
    SubstreamRng rng(53, SubstreamRng::Generic);
    std::vector<cx> q(6);
    for (auto& v : q) {
        const double a = 6.283185307179586 * rng.next_uniform();
        v = cx{std::cos(a), std::sin(a)};
    }
    const CMat h = effective_channel(ch, q);
    for (int k = 0; k < 4; ++k) {
        for (int t = 0; t < 5; ++t) {
            cx acc = ch.h_d.at(k, t);
            for (int j = 0; j < 6; ++j) {
                acc += ch.h_ru_h.at(k, j) * q[static_cast<std::size_t>(j)] *
                       ch.h_br.at(j, t);
            }
            CHECK(std::abs(h.at(k, t) - acc) < 1e-12);
        }
    }
}

TEST_CASE("effective_channel is linear in the phasor vector") {
    const ChannelSet ch = random_channelset(54, 3, 5, 4);
    SubstreamRng rng(55, SubstreamRng::Generic);
    std::vector<cx> qa(5), qb(5), qsum(5);
    for (int j = 0; j < 5; ++j) {
        qa[static_cast<std::size_t>(j)] = rng.next_cnormal();
        qb[static_cast<std::size_t>(j)] = rng.next_cnormal();
        qsum[static_cast<std::size_t>(j)] = qa[static_cast<std::size_t>(j)] +
                                            qb[static_cast<std::size_t>(j)];
    }
    const CMat ha = effective_channel(ch, qa);
    const CMat hb = effective_channel(ch, qb);
    const CMat hs = effective_channel(ch, qsum);
    for (int k = 0; k < 3; ++k) {
        for (int t = 0; t < 4; ++t) {
            const cx lin = ha.at(k, t) + hb.at(k, t) - ch.h_d.at(k, t);
            CHECK(std::abs(hs.at(k, t) - lin) < 1e-12);
        }
    }
}

TEST_CASE("hardening_metric: degenerate and worst cases") {
    // Single column: no off-diagonals.
    CMat one_col(4, 1);
    for (auto& v : one_col.data()) v = cx{1.0, 0.5};
    CHECK(hardening_metric(one_col) == 0.0);

    // Identical rows: rank-one Gram, metric near the diagonal magnitude.
    CMat flat(64, 4);
    const cx row[4] = {{1.0, 0.0}, {0.5, 0.5}, {0.0, -1.0}, {0.7, 0.1}};
    for (int j = 0; j < 64; ++j) {
        for (int t = 0; t < 4; ++t) flat.at(j, t) = row[t];
    }
    const double metric = hardening_metric(flat);
    double diag_mean = 0.0;
    for (int t = 0; t < 4; ++t) diag_mean += std::norm(row[t]);
    diag_mean /= 4.0;
    CHECK(metric > 0.5 * diag_mean);
}

TEST_CASE("hardening_metric concentrates like 1/sqrt(ML)") {
    auto mean_metric = [](int ml, int draws) {
        double acc = 0.0;
        for (int d = 0; d < draws; ++d) {
            SubstreamRng rng(800 + d, SubstreamRng::Generic,
                             static_cast<std::uint64_t>(ml));
            CMat h(ml, 8);
            for (auto& v : h.data()) v = rng.next_cnormal();
            acc += hardening_metric(h);
        }
        return acc / draws;
    };
    const double m64 = mean_metric(64, 12);
    const double m1024 = mean_metric(1024, 4);
    const double ratio = m64 / m1024;  // expect about sqrt(16) = 4
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("channel set JSON round trip") {
    const ChannelSet ch = random_channelset(60, 2, 3, 4);
    const ChannelSet back = channel_set_from_json(channel_set_to_json(ch));
    CHECK(back.h_d.data() == ch.h_d.data());
    CHECK(back.h_br.data() == ch.h_br.data());
    CHECK(back.h_ru_h.data() == ch.h_ru_h.data());
}
