#include "doctest.h"

#include <cmath>

#include "rcf/digital_bf.hpp"
#include "rcf/power_metrics.hpp"
#include "rcf/rng.hpp"

using namespace rcf;

namespace {

CMat random_cmat(std::uint64_t seed, int rows, int cols) {
    SubstreamRng rng(seed, SubstreamRng::Generic,
                     static_cast<std::uint64_t>(rows),
                     static_cast<std::uint64_t>(cols));
    CMat m(rows, cols);
    for (auto& v : m.data()) v = rng.next_cnormal();
    return m;
}

}  // namespace

TEST_CASE("user_rates: zero beamformer, unit SNR") {
    const CMat h = random_cmat(1, 2, 4);
    const CMat v0(4, 2);
    const RateReport zero = user_rates(h, v0, 1e-12);
    CHECK(zero.sum == 0.0);
    CHECK(zero.per_user[0] == 0.0);

    // K = 1 with |H v|^2 equal to the noise power: exactly 1 bit/s/Hz.
    CMat h1(1, 1);
    h1.at(0, 0) = cx{1.0, 0.0};
    CMat v1(1, 1);
    const double noise = 1e-12;
    v1.at(0, 0) = cx{std::sqrt(noise), 0.0};
    const RateReport r1 = user_rates(h1, v1, noise);
    CHECK(r1.per_user[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r1.sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("user_rates: zero-forcing gives log2(1 + p_k/noise) exactly") {
    const int k = 4, t = 8;
    const CMat h = random_cmat(2, k, t);
    SubstreamRng rng(3, SubstreamRng::Generic);
    std::vector<double> p(k);
    for (auto& x : p) x = 0.5 + rng.next_uniform();
    const BeamformerState st = zf_beamformer(h, p);
    const double noise = 0.1;
    const RateReport rr = user_rates(h, st.v_d, noise);
    for (int i = 0; i < k; ++i) {
        const double want = std::log2(1.0 + p[static_cast<std::size_t>(i)] / noise);
        CHECK(rr.per_user[static_cast<std::size_t>(i)] ==
              doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(rr.sum == doctest::Approx(std::log2(1.0 + p[0] / noise) +
                                    std::log2(1.0 + p[1] / noise) +
                                    std::log2(1.0 + p[2] / noise) +
                                    std::log2(1.0 + p[3] / noise))
                        .epsilon(1e-9));
}

TEST_CASE("total_power: static-only case matches the hand sum") {
    SystemConfig cfg;
    cfg.n_bs = 1;
    cfg.n_ant = 2;
    cfg.n_users = 1;
    cfg.n_ris = 1;
    cfg.ris_elements = 2;
    cfg.pb_w = 10.0;                 // 10 dBW
    cfg.pr_w = dbm_to_w(15.0);       // 3-bit element power
    cfg.pu_w = dbm_to_w(10.0);
    const CMat v0(2, 1);
    const PowerBreakdown pb = total_power(cfg, v0);
    CHECK(pb.amplifier_weighted == 0.0);
    CHECK(pb.total ==
          doctest::Approx(10.0 + 2.0 * dbm_to_w(15.0) + dbm_to_w(10.0))
              .epsilon(1e-12));
    CHECK(pb.total == doctest::Approx(10.1632).epsilon(5e-4));
    CHECK(pb.total == pb.amplifier_weighted + pb.static_bs + pb.static_ris +
                          pb.static_users);
}

TEST_CASE("total_power: transmit term and scaling") {
    SystemConfig cfg;
    cfg.n_bs = 1;
    cfg.n_ant = 1;
    cfg.n_users = 1;
    cfg.n_ris = 0;
    cfg.amp_loss = 1.0;
    CMat v(1, 1);
    v.at(0, 0) = cx{1.0, 0.0};
    const PowerBreakdown pb = total_power(cfg, v);
    CHECK(pb.amplifier_weighted == doctest::Approx(1.0).epsilon(1e-15));

    // Doubling the beamformer quadruples the amplifier term.
    v.at(0, 0) = cx{2.0, 0.0};
    const PowerBreakdown pb2 = total_power(cfg, v);
    CHECK(pb2.amplifier_weighted ==
          doctest::Approx(4.0 * pb.amplifier_weighted).epsilon(1e-12));
}

TEST_CASE("total_power: row-count mismatch is rejected") {
    SystemConfig cfg;
    const CMat wrong(cfg.total_antennas() + 1, cfg.n_users);
    CHECK_THROWS_AS(total_power(cfg, wrong), BlockMismatch);
}

TEST_CASE("total_power does not depend on the phase configuration") {
    SystemConfig cfg;
    const CMat v = random_cmat(9, cfg.total_antennas(), cfg.n_users);
    const PowerBreakdown a = total_power(cfg, v);
    const PowerBreakdown b = total_power(cfg, v);  // same V, any phase state
    CHECK(a.total == b.total);
}

TEST_CASE("energy_efficiency: arithmetic and proportionality") {
    RateReport rr;
    rr.sum = 10.0;
    PowerBreakdown pb;
    pb.total = 50.0;
    CHECK(energy_efficiency(rr, pb, 10e6) ==
          doctest::Approx(2.0e6).epsilon(1e-12));

    rr.sum = 0.0;
    CHECK(energy_efficiency(rr, pb, 10e6) == 0.0);

    rr.sum = 3.0;
    const double eta1 = energy_efficiency(rr, pb, 1e6);
    const double eta2 = energy_efficiency(rr, pb, 2e6);
    CHECK(eta2 == doctest::Approx(2.0 * eta1).epsilon(1e-12));
}
