#include "rcf/channel.hpp"

#include <cmath>

#include "rcf/rng.hpp"

#include "json.hpp"

namespace rcf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kSpeedOfLight = 299792458.0;

Vec2 uniform_in_disc(SubstreamRng& rng, double radius) {
    // Radius via inverse CDF (r = R sqrt(u)), angle uniform.
    const double u = rng.next_uniform();
    const double a = kTwoPi * rng.next_uniform();
    const double r = radius * std::sqrt(u);
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace

double SystemConfig::element_power_for_bits(int bits) {
    switch (bits) {
        case 1: return dbm_to_w(5.0);
        case 2: return dbm_to_w(10.0);
        case 3: return dbm_to_w(15.0);
        case 0: return dbm_to_w(25.0);  // continuous phases
        default:
            throw ConfigError("phase_bits must be 1, 2, 3 or 0 (continuous)");
    }
}

void SystemConfig::validate() const {
    if (n_bs < 1 || n_ant < 1 || n_users < 1) {
        throw ConfigError("counts n_bs, n_antennas, n_users must be >= 1");
    }
    if (n_ris < 0 || (n_ris > 0 && ris_elements < 1)) {
        throw ConfigError("ris_elements must be >= 1 when n_ris > 0");
    }
    if (n_users > n_bs * n_ant) {
        throw ConfigError("n_users must not exceed n_bs * n_antennas");
    }
    if (!(phase_bits == 0 || (phase_bits >= 1 && phase_bits <= 3))) {
        throw ConfigError("phase_bits must be 1, 2, 3 or 0 (continuous)");
    }
    if (!(bandwidth_hz > 0) || !(noise_w > 0) || !(carrier_hz > 0)) {
        throw ConfigError("bandwidth, noise power and carrier must be positive");
    }
    if (!(bs_radius_m > 0) || user_radius_m < 0) {
        throw ConfigError("radii must be positive (user radius may be zero)");
    }
    if (pt_w < 0) {
        throw ConfigError("transmit budget must be nonnegative");
    }
    if (!(amp_loss > 0) || !(pb_w > 0) || pr_w < 0 || !(pu_w > 0)) {
        throw ConfigError("power parameters must be positive");
    }
    if (!(epsilon > 0) || !(rho > 0)) {
        throw ConfigError("thresholds must be positive");
    }
    if (rician_kappa < 0) {
        throw ConfigError("rician_kappa must be nonnegative");
    }
}

Topology generate_topology(const SystemConfig& cfg, std::uint64_t seed) {
    Topology t;
    t.bs_positions.reserve(static_cast<std::size_t>(cfg.n_bs));
    for (int i = 0; i < cfg.n_bs; ++i) {
        SubstreamRng rng(seed, SubstreamRng::TopoBs, static_cast<std::uint64_t>(i));
        t.bs_positions.push_back(uniform_in_disc(rng, cfg.bs_radius_m));
    }
    t.ris_positions.reserve(static_cast<std::size_t>(cfg.n_ris));
    for (int i = 0; i < cfg.n_ris; ++i) {
        SubstreamRng rng(seed, SubstreamRng::TopoRis, static_cast<std::uint64_t>(i));
        t.ris_positions.push_back(uniform_in_disc(rng, cfg.bs_radius_m));
    }
    t.user_positions.reserve(static_cast<std::size_t>(cfg.n_users));
    for (int i = 0; i < cfg.n_users; ++i) {
        SubstreamRng rng(seed, SubstreamRng::TopoUser, static_cast<std::uint64_t>(i));
        t.user_positions.push_back(uniform_in_disc(rng, cfg.user_radius_m));
    }
    return t;
}

double path_loss_linear(double distance_m, double carrier_freq_hz) {
    const double d = std::max(distance_m, 1.0);
    const double f_ghz = carrier_freq_hz * 1e-9;
    const double pl_db = 28.0 + 22.0 * std::log10(d) + 20.0 * std::log10(f_ghz);
    return std::pow(10.0, -pl_db / 10.0);
}

std::vector<Vec2> bs_antenna_positions(const Vec2& center, int n_ant,
                                       double spacing_m) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n_ant));
    const double mid = 0.5 * (n_ant - 1);
    for (int a = 0; a < n_ant; ++a) {
        out.push_back({center.x + (a - mid) * spacing_m, center.y});
    }
    return out;
}

std::vector<Vec2> ris_element_positions(const Vec2& center, int n_elements,
                                        double pitch_m) {
    // Square grid when the count is a perfect square, otherwise a single row.
    int cols = static_cast<int>(std::lround(std::sqrt(
        static_cast<double>(n_elements))));
    int rows;
    if (cols * cols == n_elements) {
        rows = cols;
    } else {
        rows = 1;
        cols = n_elements;
    }
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n_elements));
    const double mid_c = 0.5 * (cols - 1);
    const double mid_r = 0.5 * (rows - 1);
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            out.push_back({center.x + (c - mid_c) * pitch_m,
                           center.y + (r - mid_r) * pitch_m});
        }
    }
    return out;
}

namespace {

// One Rician link sample: sqrt(g) * (LOS phasor + scatter), LOS phase from
// the exact element-to-element distance.
cx rician_link(const Vec2& a, const Vec2& b, const SystemConfig& cfg,
               SubstreamRng& rng) {
    const double d = dist(a, b);
    const double g = path_loss_linear(d, cfg.carrier_hz);
    const double lambda = kSpeedOfLight / cfg.carrier_hz;
    const double kappa = cfg.rician_kappa;
    const double los_w = std::sqrt(kappa / (kappa + 1.0));
    const double sc_w = std::sqrt(1.0 / (kappa + 1.0));
    const double phase = -kTwoPi * d / lambda;
    const cx los{std::cos(phase), std::sin(phase)};
    const cx w = rng.next_cnormal();
    return std::sqrt(g) * (los_w * los + sc_w * w);
}

}  // namespace

ChannelSet generate_channels(const Topology& topo, const SystemConfig& cfg,
                             std::uint64_t seed) {
    const int t_ant = cfg.total_antennas();
    const int ml = cfg.total_elements();

    std::vector<std::vector<Vec2>> bs_ants;
    bs_ants.reserve(topo.bs_positions.size());
    for (const Vec2& c : topo.bs_positions) {
        bs_ants.push_back(bs_antenna_positions(c, cfg.n_ant,
                                               cfg.bs_antenna_spacing_m));
    }
    std::vector<std::vector<Vec2>> ris_elems;
    ris_elems.reserve(topo.ris_positions.size());
    for (const Vec2& c : topo.ris_positions) {
        ris_elems.push_back(ris_element_positions(c, cfg.ris_elements,
                                                  cfg.ris_element_size_m));
    }

    ChannelSet ch;
    ch.h_d = CMat(cfg.n_users, t_ant);
    ch.h_br = CMat(ml, t_ant);
    ch.h_ru_h = CMat(cfg.n_users, ml);

    for (int k = 0; k < cfg.n_users; ++k) {
        const Vec2& user = topo.user_positions[static_cast<std::size_t>(k)];
        for (int n = 0; n < cfg.n_bs; ++n) {
            for (int a = 0; a < cfg.n_ant; ++a) {
                SubstreamRng rng(seed, SubstreamRng::FadeDirect,
                                 static_cast<std::uint64_t>(n),
                                 static_cast<std::uint64_t>(a),
                                 static_cast<std::uint64_t>(k));
                ch.h_d.at(k, n * cfg.n_ant + a) =
                    rician_link(bs_ants[static_cast<std::size_t>(n)]
                                       [static_cast<std::size_t>(a)],
                                user, cfg, rng);
            }
        }
    }

    for (int m = 0; m < cfg.n_ris; ++m) {
        for (int l = 0; l < cfg.ris_elements; ++l) {
            const int j = m * cfg.ris_elements + l;
            const Vec2& elem = ris_elems[static_cast<std::size_t>(m)]
                                        [static_cast<std::size_t>(l)];
            for (int n = 0; n < cfg.n_bs; ++n) {
                for (int a = 0; a < cfg.n_ant; ++a) {
                    SubstreamRng rng(seed, SubstreamRng::FadeBsRis,
                                     static_cast<std::uint64_t>(m),
                                     static_cast<std::uint64_t>(l),
                                     static_cast<std::uint64_t>(n),
                                     static_cast<std::uint64_t>(a));
                    ch.h_br.at(j, n * cfg.n_ant + a) =
                        rician_link(bs_ants[static_cast<std::size_t>(n)]
                                           [static_cast<std::size_t>(a)],
                                    elem, cfg, rng);
                }
            }
            for (int k = 0; k < cfg.n_users; ++k) {
                SubstreamRng rng(seed, SubstreamRng::FadeRisUser,
                                 static_cast<std::uint64_t>(m),
                                 static_cast<std::uint64_t>(l),
                                 static_cast<std::uint64_t>(k));
                ch.h_ru_h.at(k, j) =
                    rician_link(elem,
                                topo.user_positions[static_cast<std::size_t>(k)],
                                cfg, rng);
            }
        }
    }
    return ch;
}

CMat effective_channel(const ChannelSet& ch, const std::vector<cx>& phasors) {
    const auto& k = simd::active();
    CMat h = ch.h_d;
    const int ml = ch.h_br.rows();
    const int t_ant = ch.h_br.cols();
    for (int row = 0; row < h.rows(); ++row) {
        for (int j = 0; j < ml; ++j) {
            const cx w = ch.h_ru_h.at(row, j) * phasors[static_cast<std::size_t>(j)];
            k.axpy(w, ch.h_br.row(j), h.row(row), static_cast<std::size_t>(t_ant));
        }
    }
    return h;
}

double hardening_metric(const CMat& h_br) {
    const int t_ant = h_br.cols();
    const int ml = h_br.rows();
    if (t_ant <= 1) return 0.0;
    // Gram of the columns: (1/ML) H_BR^H H_BR, off-diagonal RMS.
    const auto& k = simd::active();
    CMat cols(t_ant, ml);  // transpose so columns become contiguous rows
    for (int j = 0; j < ml; ++j) {
        for (int t = 0; t < t_ant; ++t) {
            cols.at(t, j) = h_br.at(j, t);
        }
    }
    double acc = 0.0;
    long count = 0;
    for (int i = 0; i < t_ant; ++i) {
        for (int j = i + 1; j < t_ant; ++j) {
            cx v = k.dotc(cols.row(i), cols.row(j), static_cast<std::size_t>(ml));
            acc += 2.0 * std::norm(v / static_cast<double>(ml));
            count += 2;
        }
    }
    return std::sqrt(acc / static_cast<double>(count));
}

double hardening_metric(const ChannelSet& ch) {
    return hardening_metric(ch.h_br);
}

std::string channel_set_to_json(const ChannelSet& ch) {
    auto mat_to_json = [](const CMat& m) {
        nlohmann::json j;
        j["rows"] = m.rows();
        j["cols"] = m.cols();
        nlohmann::json entries = nlohmann::json::array();
        for (const cx& v : m.data()) {
            entries.push_back({v.real(), v.imag()});
        }
        j["entries"] = std::move(entries);
        return j;
    };
    nlohmann::json j;
    j["h_d"] = mat_to_json(ch.h_d);
    j["h_br"] = mat_to_json(ch.h_br);
    j["h_ru_h"] = mat_to_json(ch.h_ru_h);
    return j.dump();
}

ChannelSet channel_set_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    auto mat_from_json = [](const nlohmann::json& jm) {
        CMat m(jm.at("rows").get<int>(), jm.at("cols").get<int>());
        const auto& entries = jm.at("entries");
        if (entries.size() != m.data().size()) {
            throw ConfigError("channel dump entry count mismatch");
        }
        for (std::size_t i = 0; i < m.data().size(); ++i) {
            m.data()[i] = cx{entries[i][0].get<double>(),
                             entries[i][1].get<double>()};
        }
        return m;
    };
    ChannelSet ch;
    ch.h_d = mat_from_json(j.at("h_d"));
    ch.h_br = mat_from_json(j.at("h_br"));
    ch.h_ru_h = mat_from_json(j.at("h_ru_h"));
    return ch;
}

}  // namespace rcf
