#include "doctest.h"

#include <cmath>
#include <string>

#include "rcf/config_io.hpp"
#include "rcf/eem.hpp"
#include "rcf/schemes.hpp"

using namespace rcf;

TEST_CASE("defaults carry the reference parameter table") {
    const SystemConfig cfg;
    CHECK(cfg.n_bs == 4);
    CHECK(cfg.n_ant == 8);
    CHECK(cfg.n_users == 8);
    CHECK(cfg.rician_kappa == 4.0);
    CHECK(cfg.noise_w == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(cfg.carrier_hz == 5.9e9);
    CHECK(cfg.ris_element_size_m == 0.02);
    CHECK(cfg.pb_w == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(cfg.pu_w == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cfg.das_antenna_w == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cfg.epsilon == 0.001);
    CHECK(cfg.rho == 0.001);
    // Per-element static power keyed by quantization bits.
    CHECK(SystemConfig::element_power_for_bits(1) ==
          doctest::Approx(dbm_to_w(5.0)));
    CHECK(SystemConfig::element_power_for_bits(2) ==
          doctest::Approx(dbm_to_w(10.0)));
    CHECK(SystemConfig::element_power_for_bits(3) ==
          doctest::Approx(dbm_to_w(15.0)));
    CHECK(SystemConfig::element_power_for_bits(0) ==
          doctest::Approx(dbm_to_w(25.0)));
}

TEST_CASE("config JSON round trip and validation") {
    SystemConfig cfg;
    cfg.n_ris = 2;
    cfg.ris_elements = 16;
    cfg.phase_bits = 2;
    cfg.pr_w = SystemConfig::element_power_for_bits(2);
    cfg.seed = 99;
    const SystemConfig back = config_from_json(config_to_json(cfg));
    CHECK(back.n_ris == 2);
    CHECK(back.ris_elements == 16);
    CHECK(back.phase_bits == 2);
    CHECK(back.seed == 99);
    CHECK(back.pr_w == doctest::Approx(cfg.pr_w).epsilon(1e-12));

    CHECK_THROWS_AS(config_from_json("{ not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"bogus_key\": 1}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"n_users\": 64}"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{\"phase_bits\": 7}"), ConfigError);
}

TEST_CASE("config defaults: element power follows phase_bits") {
    const SystemConfig one = config_from_json("{\"phase_bits\": 1}");
    CHECK(one.pr_w == doctest::Approx(dbm_to_w(5.0)).epsilon(1e-12));
    const SystemConfig cont = config_from_json("{\"phase_bits\": 0}");
    CHECK(cont.pr_w == doctest::Approx(dbm_to_w(25.0)).epsilon(1e-12));
    // Explicit pr_dbm wins over the derived default.
    const SystemConfig expl =
        config_from_json("{\"phase_bits\": 1, \"pr_dbm\": 20.0}");
    CHECK(expl.pr_w == doctest::Approx(dbm_to_w(20.0)).epsilon(1e-12));
}

TEST_CASE("config hash is stable under key reordering") {
    const std::string a = "{\"n_users\": 4, \"n_bs\": 2, \"n_antennas\": 4}";
    const std::string b = "{\"n_antennas\": 4, \"n_bs\": 2, \"n_users\": 4}";
    CHECK(config_hash(config_from_json(a)) == config_hash(config_from_json(b)));
    const std::string c = "{\"n_users\": 5, \"n_bs\": 2, \"n_antennas\": 4}";
    CHECK(config_hash(config_from_json(a)) != config_hash(config_from_json(c)));
}

TEST_CASE("apply_overrides parses scalars and rejects unknown keys") {
    SystemConfig cfg;
    const SystemConfig out =
        apply_overrides(cfg, {"n_ris=1", "ris_elements=4", "pt_dbm=20",
                              "analog_update=enumerate"});
    CHECK(out.n_ris == 1);
    CHECK(out.ris_elements == 4);
    CHECK(out.pt_w == doctest::Approx(dbm_to_w(20.0)).epsilon(1e-12));
    CHECK_THROWS_AS(apply_overrides(cfg, {"nope=3"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(cfg, {"n_ris"}), ConfigError);
    // Changing bits re-derives the per-element power default.
    const SystemConfig bits = apply_overrides(cfg, {"phase_bits=1"});
    CHECK(bits.pr_w == doctest::Approx(dbm_to_w(5.0)).epsilon(1e-12));
}

TEST_CASE("scheme derivations follow the benchmark definitions") {
    SystemConfig base;
    base.n_ris = 3;
    base.ris_elements = 64;

    const Scheme proposed = Scheme::make(SchemeKind::ProposedRis, base);
    CHECK(proposed.derived.n_ris == 3);

    const Scheme no_ris = Scheme::make(SchemeKind::NoRis, base);
    CHECK(no_ris.derived.n_ris == 0);
    CHECK(no_ris.derived.n_bs == base.n_bs);

    const Scheme ccf = Scheme::make(SchemeKind::ConventionalCellfree, base);
    CHECK(ccf.derived.n_bs == base.n_bs + base.n_ris);
    CHECK(ccf.derived.n_ris == 0);

    const Scheme das = Scheme::make(SchemeKind::Das, base);
    CHECK(das.derived.n_ris == 0);
    CHECK(das.das_extra_antennas == 192);
    CHECK(base.das_antenna_w == doctest::Approx(dbm_to_w(20.0)).epsilon(1e-12));

    CHECK(std::string(scheme_name(SchemeKind::Das)) == "das");
    CHECK(scheme_from_name("conventional_cellfree").value() ==
          SchemeKind::ConventionalCellfree);
    CHECK(!scheme_from_name("bogus").has_value());
}

namespace {

SystemConfig bench_cfg() {
    SystemConfig cfg;
    cfg.n_bs = 2;
    cfg.n_ant = 4;
    cfg.n_users = 3;
    cfg.n_ris = 1;
    cfg.ris_elements = 8;
    cfg.phase_bits = 1;
    cfg.pr_w = SystemConfig::element_power_for_bits(1);
    return cfg;
}

}  // namespace

TEST_CASE("run_benchmark: proposed with no RISs equals the no-RIS scheme") {
    SystemConfig cfg = bench_cfg();
    cfg.n_ris = 0;
    const std::vector<std::uint64_t> seeds{0, 1, 2};
    const auto a =
        run_benchmark(Scheme::make(SchemeKind::ProposedRis, cfg), cfg, seeds);
    const auto b =
        run_benchmark(Scheme::make(SchemeKind::NoRis, cfg), cfg, seeds);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ok);
        CHECK(a[i].eta == b[i].eta);
        CHECK(a[i].sum_rate == b[i].sum_rate);
    }
}

TEST_CASE("run_benchmark: DAS runs and the record format is exact") {
    const SystemConfig cfg = bench_cfg();
    const std::vector<std::uint64_t> seeds{0, 1};
    const auto recs =
        run_benchmark(Scheme::make(SchemeKind::Das, cfg), cfg, seeds);
    REQUIRE(recs.size() == 2);
    for (const auto& r : recs) {
        CHECK(r.ok);
        CHECK(r.eta > 0.0);
        CHECK(!r.config_hash.empty());
    }
    const std::string csv = run_records_csv(recs);
    CHECK(csv.rfind("scheme,seed,eta_bits_per_joule,sum_rate_bps_hz,"
                    "iterations,wall_time_s\n", 0) == 0);
    CHECK(csv.find("das,0,") != std::string::npos);
}

TEST_CASE("run_benchmark: deterministic records per seed") {
    const SystemConfig cfg = bench_cfg();
    const std::vector<std::uint64_t> seeds{0, 1, 2, 3};
    const Scheme s = Scheme::make(SchemeKind::ProposedRis, cfg);
    const auto a = run_benchmark(s, cfg, seeds);
    const auto b = run_benchmark(s, cfg, seeds);
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        CHECK(a[i].eta == b[i].eta);
        CHECK(a[i].sum_rate == b[i].sum_rate);
        CHECK(a[i].iterations == b[i].iterations);
    }
    // Golden regression on the deterministic CSV columns (wall time varies).
    auto strip_wall = [](const std::string& csv) {
        std::string out;
        std::size_t pos = 0;
        while (pos < csv.size()) {
            std::size_t eol = csv.find('\n', pos);
            if (eol == std::string::npos) eol = csv.size();
            const std::string line = csv.substr(pos, eol - pos);
            const std::size_t cut = line.rfind(',');
            out += line.substr(0, cut);
            out += '\n';
            pos = eol + 1;
        }
        return out;
    };
    CHECK(strip_wall(run_records_csv(a)) == strip_wall(run_records_csv(b)));
}

TEST_CASE("das channel has the enlarged antenna dimension") {
    const SystemConfig cfg = bench_cfg();
    const Topology topo = generate_topology(cfg, 5);
    const CMat h = das_channel(topo, cfg, 5);
    CHECK(h.rows() == cfg.n_users);
    CHECK(h.cols() == cfg.total_antennas() + cfg.total_elements());
    // Direct block matches the RIS-aided generator exactly.
    const ChannelSet ch = generate_channels(topo, cfg, 5);
    for (int k = 0; k < cfg.n_users; ++k) {
        for (int t = 0; t < cfg.total_antennas(); ++t) {
            CHECK(h.at(k, t) == ch.h_d.at(k, t));
        }
    }
}
