#include "rcf/analysis.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>

#include "rcf/eem.hpp"
#include "rcf/parallel.hpp"

#include "json.hpp"

namespace rcf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void append_double(std::string& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<std::size_t>(len));
}

}  // namespace

// --- transmit-power curve ---------------------------------------------------

double prop1_eta(double x, const Prop1Params& prm) {
    return prm.bandwidth_hz * (std::log2(x) - std::log2(prm.noise_w)) /
           (prm.amp_loss * x + prm.static_w);
}

double prop1_molecule(double x, const Prop1Params& prm) {
    const double b = prm.bandwidth_hz;
    const double w = prm.amp_loss;
    return (b / kLn2) * prm.static_w + w * b * std::log2(prm.noise_w) * x +
           (w * b / kLn2) * (x - x * std::log(x));
}

double prop1_derivative(double x, const Prop1Params& prm) {
    const double d = prm.amp_loss * x + prm.static_w;
    return prop1_molecule(x, prm) / (x * d * d);
}

// --- RIS-count curve ----------------------------------------------------------

namespace {

struct Prop2Coefs {
    double c1, c2, c3, c4, c5;
};

Prop2Coefs prop2_coefs(const Prop2Params& prm) {
    Prop2Coefs c{};
    const double b = prm.bandwidth_hz;
    const double l = static_cast<double>(prm.ris_elements);
    c.c1 = 2.0 * b * prm.n_users / kLn2;
    double sum_tx = 0.0;
    c.c2 = 0.0;
    for (double tv : prm.per_user_tx_w) {
        c.c2 += b * std::log2(l * l * tv / prm.noise_w);
        sum_tx += tv;
    }
    c.c3 = prm.amp_loss * l * l * sum_tx;
    c.c4 = l * prm.pr_w - prm.pb_w;
    c.c5 = prm.n_users * prm.pu_w + prm.n_total * prm.pb_w;
    return c;
}

}  // namespace

double prop2_eta(double m, const Prop2Params& prm) {
    const Prop2Coefs c = prop2_coefs(prm);
    return (c.c1 * std::log(m) + c.c2) / (m * m * c.c3 + m * c.c4 + c.c5);
}

double prop2_derivative(double m, const Prop2Params& prm) {
    const Prop2Coefs c = prop2_coefs(prm);
    const double lnm = std::log(m);
    const double num = c.c1 * c.c5 + m * c.c1 * c.c4 - m * lnm * c.c1 * c.c4 -
                       m * c.c2 * c.c4 + m * m * c.c1 * c.c3 -
                       2.0 * m * m * lnm * c.c1 * c.c3 -
                       2.0 * m * m * c.c2 * c.c3;
    const double q = m * m * c.c3 + m * c.c4 + c.c5;
    return num / (m * q * q);
}

double prop2_term3(double m, const Prop2Params& prm) {
    const Prop2Coefs c = prop2_coefs(prm);
    return -m * std::log(m) * (c.c1 * c.c4 + 2.0 * m * c.c1 * c.c3);
}

// --- RIS-size curve -----------------------------------------------------------

namespace {

// Shared pieces: S collects the L-independent power, c_a the log argument.
struct Prop3Coefs {
    double s;
    double c_a;
};

Prop3Coefs prop3_coefs(const Prop3Params& prm) {
    Prop3Coefs c{};
    c.s = prm.amp_loss * prm.sum_tx_w + prm.n_users * prm.pu_w +
          prm.n_bs * prm.pb_w;
    c.c_a = static_cast<double>(prm.n_ris) / prm.n_users * prm.amp_loss *
            prm.sum_ak;
    return c;
}

}  // namespace

double prop3_eta(double l, const Prop3Params& prm) {
    const Prop3Coefs c = prop3_coefs(prm);
    return prm.bandwidth_hz * (std::log2(l) + std::log2(c.c_a)) /
           (c.s + l * prm.n_ris * prm.pr_w);
}

Prop3Result prop3_g(double l, const Prop3Params& prm) {
    const Prop3Coefs c = prop3_coefs(prm);
    const double b = prm.bandwidth_hz;
    Prop3Result out;
    out.g_value = (b / kLn2) * c.s +
                  prm.n_ris * prm.pr_w *
                      ((b / kLn2) * (l - l * std::log(l)) -
                       l * b * std::log2(c.c_a));
    const double static_w = prm.n_bs * prm.pb_w +
                            prm.n_ris * l * prm.pr_w +
                            prm.n_users * prm.pu_w;
    out.condition = static_w / (prm.n_ris * prm.pr_w) >
                    std::log(prm.n_bs * prm.pt_w /
                             (prm.n_users * prm.noise_w));
    return out;
}

double prop3_derivative(double l, const Prop3Params& prm) {
    const Prop3Coefs c = prop3_coefs(prm);
    const double d = c.s + l * prm.n_ris * prm.pr_w;
    return prop3_g(l, prm).g_value / (l * d * d);
}

AnalysisReference analysis_reference(const SystemConfig& cfg,
                                     std::uint64_t seed) {
    const Topology topo = generate_topology(cfg, seed);
    const ChannelSet ch = generate_channels(topo, cfg, seed);
    const EEReport rep = run_eem(cfg, ch, init_random_phase(cfg, seed));

    AnalysisReference ref;
    const CMat& v = rep.beam_state.v_d;
    ref.per_user_tx_w.assign(static_cast<std::size_t>(v.cols()), 0.0);
    for (int i = 0; i < v.rows(); ++i) {
        for (int j = 0; j < v.cols(); ++j) {
            ref.per_user_tx_w[static_cast<std::size_t>(j)] +=
                std::norm(v.at(i, j));
        }
    }
    for (double tv : ref.per_user_tx_w) ref.sum_tx_w += tv;

    // Mean cascaded per-element gain times the per-user transmit power,
    // normalized by noise.
    const int ml = ch.h_br.rows();
    if (ml > 0) {
        const auto& kn = simd::active();
        std::vector<double> row_norm(static_cast<std::size_t>(ml));
        for (int j = 0; j < ml; ++j) {
            row_norm[static_cast<std::size_t>(j)] = kn.sum_abs2(
                ch.h_br.row(j), static_cast<std::size_t>(ch.h_br.cols()));
        }
        for (int k = 0; k < cfg.n_users; ++k) {
            double acc = 0.0;
            for (int j = 0; j < ml; ++j) {
                acc += std::norm(ch.h_ru_h.at(k, j)) *
                       row_norm[static_cast<std::size_t>(j)];
            }
            ref.sum_ak += (acc / ml) *
                          ref.per_user_tx_w[static_cast<std::size_t>(k)] /
                          cfg.noise_w;
        }
    }
    return ref;
}

// --- empirical sweeps ---------------------------------------------------------

const char* sweep_variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::TransmitPower: return "pt_dbm";
        case SweepVariable::RisCount: return "m";
        case SweepVariable::RisSize: return "l";
        case SweepVariable::PhaseBits: return "b";
    }
    return "?";
}

namespace {

SystemConfig config_at(SweepVariable var, double value,
                       const SystemConfig& base) {
    SystemConfig cfg = base;
    switch (var) {
        case SweepVariable::TransmitPower:
            cfg.pt_w = dbm_to_w(value);
            break;
        case SweepVariable::RisCount: {
            const int n0 = base.n_bs + base.n_ris;
            cfg.n_ris = static_cast<int>(value);
            cfg.n_bs = n0 - cfg.n_ris;
            break;
        }
        case SweepVariable::RisSize:
            cfg.ris_elements = static_cast<int>(value);
            break;
        case SweepVariable::PhaseBits:
            cfg.phase_bits = static_cast<int>(value);
            cfg.pr_w = SystemConfig::element_power_for_bits(cfg.phase_bits);
            break;
    }
    cfg.validate();
    return cfg;
}

// Rising-then-falling shape around the argmax, 5% relative tolerance,
// sub-1e-9 fluctuations ignored.
bool unimodal(const std::vector<double>& eta, bool require_interior) {
    if (eta.size() < 2) return false;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < eta.size(); ++i) {
        if (eta[i] > eta[peak]) peak = i;
    }
    if (require_interior && (peak == 0 || peak + 1 == eta.size())) return false;
    for (std::size_t i = 0; i < peak; ++i) {
        if (eta[i + 1] < eta[i] * (1.0 - 0.05) - 1e-9 * eta[peak]) return false;
    }
    for (std::size_t i = peak; i + 1 < eta.size(); ++i) {
        if (eta[i + 1] > eta[i] * (1.0 + 0.05) + 1e-9 * eta[peak]) return false;
    }
    return true;
}

bool rise_then_flat(const std::vector<double>& eta) {
    if (eta.size() < 2) return false;
    std::size_t peak = 0;
    for (std::size_t i = 1; i < eta.size(); ++i) {
        if (eta[i] > eta[peak]) peak = i;
    }
    for (std::size_t i = 0; i < peak; ++i) {
        if (eta[i + 1] <= eta[i] * (1.0 - 1e-9)) return false;
    }
    return std::abs(eta.back() - eta[peak]) <= 0.05 * eta[peak];
}

}  // namespace

PropositionReport empirical_sweep(SweepVariable var,
                                  const std::vector<double>& grid,
                                  const SystemConfig& base,
                                  const std::vector<std::uint64_t>& seeds) {
    PropositionReport rep;
    rep.sweep_variable = sweep_variable_name(var);
    switch (var) {
        case SweepVariable::TransmitPower: rep.proposition_id = "prop1"; break;
        case SweepVariable::RisCount: rep.proposition_id = "prop2"; break;
        case SweepVariable::RisSize: rep.proposition_id = "prop3"; break;
        case SweepVariable::PhaseBits: rep.proposition_id = "bits"; break;
    }
    rep.sweep_points = grid;

    const int n_points = static_cast<int>(grid.size());
    const int n_seeds = static_cast<int>(seeds.size());
    rep.cells.resize(static_cast<std::size_t>(n_points * n_seeds));

    parallel_for(n_points * n_seeds, [&](int idx) {
        const int gi = idx / n_seeds;
        const int si = idx % n_seeds;
        auto& cell = rep.cells[static_cast<std::size_t>(idx)];
        cell.value = grid[static_cast<std::size_t>(gi)];
        cell.seed = seeds[static_cast<std::size_t>(si)];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const SystemConfig cfg = config_at(var, cell.value, base);
            const Topology topo = generate_topology(cfg, cell.seed);
            const ChannelSet ch = generate_channels(topo, cfg, cell.seed);
            const EEReport r =
                run_eem(cfg, ch, init_random_phase(cfg, cell.seed));
            cell.eta = r.final_eta;
            cell.sum_rate = r.final_rates.sum;
            cell.iterations = r.iterations;
        } catch (const Error& e) {
            cell.ok = false;
            cell.error = e.what();
        }
        cell.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
    });

    rep.eta_values.assign(static_cast<std::size_t>(n_points), 0.0);
    rep.sum_rate_values.assign(static_cast<std::size_t>(n_points), 0.0);
    for (int gi = 0; gi < n_points; ++gi) {
        double eta_acc = 0.0, rate_acc = 0.0;
        int ok_count = 0;
        for (int si = 0; si < n_seeds; ++si) {
            const auto& cell =
                rep.cells[static_cast<std::size_t>(gi * n_seeds + si)];
            if (cell.ok) {
                eta_acc += cell.eta;
                rate_acc += cell.sum_rate;
                ++ok_count;
            }
        }
        if (ok_count > 0) {
            rep.eta_values[static_cast<std::size_t>(gi)] = eta_acc / ok_count;
            rep.sum_rate_values[static_cast<std::size_t>(gi)] =
                rate_acc / ok_count;
        }
    }

    // Analytic derivative curve alongside the empirical means.
    switch (var) {
        case SweepVariable::TransmitPower: {
            Prop1Params prm{base.bandwidth_hz, base.amp_loss, base.noise_w,
                            base.static_power_w()};
            for (double v : grid) {
                // Evaluate at the budget itself; at low budgets the optimum
                // rides the constraint, so the budget is the natural abscissa.
                rep.derivative_values.push_back(
                    prop1_derivative(base.n_bs * dbm_to_w(v), prm));
            }
            rep.verdict = rise_then_flat(rep.eta_values);
            rep.condition_holds = true;
            break;
        }
        case SweepVariable::RisCount: {
            const AnalysisReference ref = analysis_reference(base, seeds.empty() ? 0 : seeds.front());
            Prop2Params prm;
            prm.bandwidth_hz = base.bandwidth_hz;
            prm.amp_loss = base.amp_loss;
            prm.noise_w = base.noise_w;
            prm.pb_w = base.pb_w;
            prm.pr_w = base.pr_w;
            prm.pu_w = base.pu_w;
            prm.n_users = base.n_users;
            prm.n_total = base.n_bs + base.n_ris;
            prm.ris_elements = base.ris_elements;
            prm.per_user_tx_w = ref.per_user_tx_w;
            for (double v : grid) {
                rep.derivative_values.push_back(prop2_derivative(v, prm));
            }
            rep.verdict = unimodal(rep.eta_values, /*require_interior=*/true);
            rep.condition_holds = true;
            break;
        }
        case SweepVariable::RisSize: {
            const AnalysisReference ref = analysis_reference(base, seeds.empty() ? 0 : seeds.front());
            Prop3Params prm;
            prm.bandwidth_hz = base.bandwidth_hz;
            prm.amp_loss = base.amp_loss;
            prm.noise_w = base.noise_w;
            prm.pb_w = base.pb_w;
            prm.pr_w = base.pr_w;
            prm.pu_w = base.pu_w;
            prm.pt_w = base.pt_w;
            prm.n_users = base.n_users;
            prm.n_bs = base.n_bs;
            prm.n_ris = base.n_ris;
            prm.sum_tx_w = ref.sum_tx_w;
            prm.sum_ak = std::max(ref.sum_ak, 1e-300);
            bool cond = true;
            for (double v : grid) {
                const Prop3Result g = prop3_g(v, prm);
                rep.derivative_values.push_back(prop3_derivative(v, prm));
                cond = cond && g.condition;
            }
            rep.condition_holds = cond;
            bool rate_ok = true;
            for (std::size_t i = 0; i + 1 < rep.sum_rate_values.size(); ++i) {
                if (rep.sum_rate_values[i + 1] <
                    rep.sum_rate_values[i] * (1.0 - 0.05)) {
                    rate_ok = false;
                }
            }
            rep.verdict =
                unimodal(rep.eta_values, /*require_interior=*/false) && rate_ok;
            break;
        }
        case SweepVariable::PhaseBits:
            rep.verdict = true;
            rep.condition_holds = true;
            break;
    }
    return rep;
}

std::string proposition_report_csv(const PropositionReport& rep) {
    std::string out =
        "variable,value,seed,eta_bits_per_joule,sum_rate_bps_hz,iterations,"
        "wall_time_s\n";
    for (const auto& c : rep.cells) {
        out += rep.sweep_variable;
        out += ',';
        append_double(out, c.value);
        out += ',';
        out += std::to_string(c.seed);
        out += ',';
        if (c.ok) {
            append_double(out, c.eta);
            out += ',';
            append_double(out, c.sum_rate);
            out += ',';
            out += std::to_string(c.iterations);
        } else {
            out += "error,error,0";
        }
        out += ',';
        append_double(out, c.wall_time_s);
        out += '\n';
    }
    return out;
}

std::string proposition_report_summary_json(const PropositionReport& rep) {
    nlohmann::json j;
    j["proposition"] = rep.proposition_id;
    j["variable"] = rep.sweep_variable;
    j["points"] = rep.sweep_points;
    j["mean_eta_bits_per_joule"] = rep.eta_values;
    j["mean_sum_rate_bps_hz"] = rep.sum_rate_values;
    j["analytic_derivative"] = rep.derivative_values;
    j["condition_holds"] = rep.condition_holds;
    j["verdict"] = rep.verdict;
    return j.dump(2);
}

}  // namespace rcf
