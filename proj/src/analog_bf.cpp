#include "rcf/analog_bf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_two_pi(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    return t;
}

}  // namespace

PhaseConfig PhaseConfig::from_indices(int bits, std::vector<int> idx) {
    PhaseConfig q;
    q.bits = bits;
    q.idx = std::move(idx);
    q.theta.resize(q.idx.size());
    const double step = q.grid_step();
    for (std::size_t j = 0; j < q.idx.size(); ++j) {
        q.theta[j] = static_cast<double>(q.idx[j]) * step;
    }
    return q;
}

PhaseConfig PhaseConfig::from_angles(std::vector<double> theta) {
    PhaseConfig q;
    q.bits = 0;
    q.theta = std::move(theta);
    for (double& t : q.theta) t = wrap_two_pi(t);
    return q;
}

PhaseConfig PhaseConfig::zeros(int n_elements, int bits) {
    PhaseConfig q;
    q.bits = bits;
    q.theta.assign(static_cast<std::size_t>(n_elements), 0.0);
    if (bits > 0) q.idx.assign(static_cast<std::size_t>(n_elements), 0);
    return q;
}

void PhaseConfig::set_discrete(int j, int grid_index) {
    idx[static_cast<std::size_t>(j)] = grid_index;
    theta[static_cast<std::size_t>(j)] =
        static_cast<double>(grid_index) * grid_step();
}

void PhaseConfig::set_angle(int j, double theta_rad) {
    theta[static_cast<std::size_t>(j)] = wrap_two_pi(theta_rad);
}

std::vector<cx> PhaseConfig::phasors() const {
    std::vector<cx> out(theta.size());
    for (std::size_t j = 0; j < theta.size(); ++j) {
        out[j] = cx{std::cos(theta[j]), std::sin(theta[j])};
    }
    return out;
}

CMat reflected_channel(const ChannelSet& ch, const std::vector<cx>& phasors) {
    const auto& kn = simd::active();
    CMat h(ch.h_ru_h.rows(), ch.h_br.cols());
    for (int k = 0; k < h.rows(); ++k) {
        for (int j = 0; j < ch.h_br.rows(); ++j) {
            const cx w = ch.h_ru_h.at(k, j) * phasors[static_cast<std::size_t>(j)];
            kn.axpy(w, ch.h_br.row(j), h.row(k),
                    static_cast<std::size_t>(h.cols()));
        }
    }
    return h;
}

double objective_f(const ChannelSet& ch, std::span<const double> p,
                   const PhaseConfig& q, bool include_direct) {
    const std::vector<cx> ph = q.phasors();
    const CMat h = include_direct ? effective_channel(ch, ph)
                                  : reflected_channel(ch, ph);
    return weighted_inverse_trace(h, p);
}

double quantize_phase(double theta, int bits) {
    return static_cast<double>(quantize_index(theta, bits)) *
           (kPi / (1 << (bits - 1)));
}

int quantize_index(double theta, int bits) {
    const int n = 1 << bits;
    const double step = kPi / (1 << (bits - 1));
    const double t = wrap_two_pi(theta);
    int best = 0;
    double best_dist = kTwoPi;
    for (int i = 0; i < n; ++i) {
        double d = std::abs(t - static_cast<double>(i) * step);
        d = std::min(d, kTwoPi - d);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Incremental sweep engine. Maintains the effective channel H, the inverse
// Gram (H H^H)^{-1} and the objective value; a phase candidate for one
// element is scored through three rank-one inverse updates.

namespace {

class SweepEngine {
public:
    SweepEngine(const ChannelSet& ch, std::span<const double> p,
                const PhaseConfig& q, bool include_direct)
        : ch_(ch), p_(p.begin(), p.end()), include_direct_(include_direct) {
        rebuild(q);
    }

    void rebuild(const PhaseConfig& q) {
        const std::vector<cx> ph = q.phasors();
        h_ = include_direct_ ? effective_channel(ch_, ph)
                             : reflected_channel(ch_, ph);
        ginv_ = hermitian_inverse(gram(h_));
        f_ = weighted_trace_from_inverse(ginv_, p_);
    }

    double f() const { return f_; }
    const CMat& h() const { return h_; }
    const CMat& ginv() const { return ginv_; }

    // Objective value and updated inverse if element j moves from its current
    // phasor to q_new. Falls back to a dense re-inversion when a rank-one
    // denominator degenerates.
    double score_candidate(int j, cx q_old, cx q_new, CMat& ginv_out) const {
        const int n_users = h_.rows();
        const int t_ant = h_.cols();
        const auto& kn = simd::active();
        const cx delta = q_new - q_old;
        if (std::abs(delta) == 0.0) {
            ginv_out = ginv_;
            return f_;
        }
        std::vector<cx> u(static_cast<std::size_t>(n_users));
        for (int k = 0; k < n_users; ++k) u[static_cast<std::size_t>(k)] = ch_.h_ru_h.at(k, j);
        const cx* r = ch_.h_br.row(j);
        // s = H conj(r)
        std::vector<cx> s(static_cast<std::size_t>(n_users));
        for (int k = 0; k < n_users; ++k) {
            s[static_cast<std::size_t>(k)] =
                kn.dotc(r, h_.row(k), static_cast<std::size_t>(t_ant));
        }
        const double r_norm_sq = kn.sum_abs2(r, static_cast<std::size_t>(t_ant));

        ginv_out = ginv_;
        std::vector<cx> u1(u), u2(s), u3(u);
        for (auto& v : u1) v *= delta;
        for (auto& v : u2) v *= std::conj(delta);
        const double c3 = std::norm(delta) * r_norm_sq;
        for (auto& v : u3) v *= c3;
        try {
            rank_one_inverse_update_inplace(ginv_out, u1, s);
            rank_one_inverse_update_inplace(ginv_out, u2, u);
            rank_one_inverse_update_inplace(ginv_out, u3, u);
        } catch (const DegenerateUpdate&) {
            // Dense fallback: rebuild the candidate Gram directly.
            CMat h_cand = h_;
            for (int k = 0; k < n_users; ++k) {
                kn.axpy(delta * u[static_cast<std::size_t>(k)], r, h_cand.row(k),
                        static_cast<std::size_t>(t_ant));
            }
            try {
                ginv_out = hermitian_inverse(gram(h_cand));
            } catch (const SingularMatrix&) {
                // Candidate collapses the channel rank; never select it.
                return std::numeric_limits<double>::infinity();
            }
        }
        return weighted_trace_from_inverse(ginv_out, p_);
    }

    // Commit element j's move; ginv_new must be the score_candidate output.
    void accept(int j, cx q_old, cx q_new, double f_new, CMat ginv_new) {
        const auto& kn = simd::active();
        const cx delta = q_new - q_old;
        for (int k = 0; k < h_.rows(); ++k) {
            kn.axpy(delta * ch_.h_ru_h.at(k, j), ch_.h_br.row(j), h_.row(k),
                    static_cast<std::size_t>(h_.cols()));
        }
        ginv_ = std::move(ginv_new);
        f_ = f_new;
    }

    // Worst per-BS budget violation of the implied ZF beamformer.
    double budget_violation(const CMat& ginv, const CMat& h,
                            const SweepOptions::BudgetGuard& g) const {
        const CMat dirs = matmul(adjoint(h), ginv);
        double worst = -std::numeric_limits<double>::infinity();
        for (int n = 0; n < g.n_bs; ++n) {
            double tx = 0.0;
            for (int r = n * g.n_ant; r < (n + 1) * g.n_ant; ++r) {
                for (int c = 0; c < dirs.cols(); ++c) {
                    tx += p_[static_cast<std::size_t>(c)] * std::norm(dirs.at(r, c));
                }
            }
            worst = std::max(worst, tx - g.budget_w);
        }
        return worst;
    }

private:
    const ChannelSet& ch_;
    std::vector<double> p_;
    bool include_direct_ = true;
    CMat h_;
    CMat ginv_;
    double f_ = 0.0;
};

ElementWorkspace assemble_from_reflected(const ChannelSet& ch,
                                         std::span<const double> p,
                                         const CMat& w_refl,
                                         const PhaseConfig& q, int j) {
    const auto& kn = simd::active();
    const int n_users = w_refl.rows();
    const int t_ant = w_refl.cols();

    ElementWorkspace ws;
    ws.j = j;
    ws.incumbent_theta = q.theta[static_cast<std::size_t>(j)];

    ws.u.resize(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k) {
        const double pk = p[static_cast<std::size_t>(k)];
        if (!(pk > 0.0)) {
            throw SingularMatrix("reflected-only form needs positive powers");
        }
        ws.u[static_cast<std::size_t>(k)] = ch.h_ru_h.at(k, j) / std::sqrt(pk);
    }
    ws.r.assign(ch.h_br.row(j), ch.h_br.row(j) + t_ant);

    // base = scaled reflected channel with element j removed
    ws.base = w_refl;
    const cx qj{std::cos(ws.incumbent_theta), std::sin(ws.incumbent_theta)};
    for (int k = 0; k < n_users; ++k) {
        kn.axpy(-qj * ws.u[static_cast<std::size_t>(k)], ws.r.data(),
                ws.base.row(k), static_cast<std::size_t>(t_ant));
    }

    ws.w.resize(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k) {
        ws.w[static_cast<std::size_t>(k)] =
            kn.dotc(ws.r.data(), ws.base.row(k), static_cast<std::size_t>(t_ant));
    }
    const double r_norm_sq = kn.sum_abs2(ws.r.data(), static_cast<std::size_t>(t_ant));

    ws.const_term = gram(ws.base);
    for (int a = 0; a < n_users; ++a) {
        for (int b = 0; b < n_users; ++b) {
            ws.const_term.at(a, b) += r_norm_sq * ws.u[static_cast<std::size_t>(a)] *
                                      std::conj(ws.u[static_cast<std::size_t>(b)]);
        }
    }
    ws.cross_term = CMat(n_users, n_users);
    for (int a = 0; a < n_users; ++a) {
        for (int b = 0; b < n_users; ++b) {
            ws.cross_term.at(a, b) = ws.u[static_cast<std::size_t>(a)] *
                                     std::conj(ws.w[static_cast<std::size_t>(b)]);
        }
    }

    // Redundant rebuild check: the assembled pieces must reproduce the Gram of
    // the full reflected channel at the incumbent phase.
    {
        CMat m = ws.const_term;
        const cx e{std::cos(ws.incumbent_theta), std::sin(ws.incumbent_theta)};
        for (int a = 0; a < n_users; ++a) {
            for (int b = 0; b < n_users; ++b) {
                m.at(a, b) += e * ws.cross_term.at(a, b) +
                              std::conj(e) * std::conj(ws.cross_term.at(b, a));
            }
        }
        const CMat direct = gram(w_refl);
        double scale = std::max(1.0, max_abs(direct));
        for (int a = 0; a < n_users; ++a) {
            for (int b = 0; b < n_users; ++b) {
                if (std::abs(m.at(a, b) - direct.at(a, b)) > 1e-10 * scale) {
                    throw Error("element workspace assembly inconsistent");
                }
            }
        }
    }

    ws.const_inv = hermitian_inverse(ws.const_term);
    ws.trace_const_inv = 0.0;
    for (int k = 0; k < n_users; ++k) ws.trace_const_inv += ws.const_inv.at(k, k).real();

    const std::vector<cx> g_u = matvec(ws.const_inv, ws.u.data());
    const std::vector<cx> g_w = matvec(ws.const_inv, ws.w.data());
    ws.x11 = kn.dotc(ws.u.data(), g_u.data(), static_cast<std::size_t>(n_users)).real();
    ws.x22 = kn.dotc(ws.w.data(), g_w.data(), static_cast<std::size_t>(n_users)).real();
    ws.x12 = kn.dotc(ws.u.data(), g_w.data(), static_cast<std::size_t>(n_users));
    ws.y11 = kn.sum_abs2(g_u.data(), static_cast<std::size_t>(n_users));
    ws.y22 = kn.sum_abs2(g_w.data(), static_cast<std::size_t>(n_users));
    ws.y12 = kn.dotc(g_u.data(), g_w.data(), static_cast<std::size_t>(n_users));

    ws.c0 = ws.x11 * ws.y22 + ws.x22 * ws.y11 -
            2.0 * (std::conj(ws.x12) * ws.y12).real();
    ws.d0 = ws.x11 * ws.x22 - std::norm(ws.x12) - 1.0;

    const double ac = ws.y12.real(), bc = ws.y12.imag();
    const double ad = ws.x12.real(), bd = ws.x12.imag();
    ws.coef_sin = 2.0 * (ac * ws.d0 - ad * ws.c0);
    ws.coef_cos = 2.0 * (bd * ws.c0 - bc * ws.d0);
    ws.coef_const = 4.0 * (ad * bc - ac * bd);

    // Stationary angles through t = tan(theta/2):
    //   (C - B) t^2 + 2 A t + (B + C) = 0, theta = pi covers the t -> inf root.
    const double A = ws.coef_sin, B = ws.coef_cos, C = ws.coef_const;
    const double scale = std::max({std::abs(A), std::abs(B), std::abs(C)});
    if (scale > 0.0) {
        const double a2 = C - B, a1 = 2.0 * A, a0 = B + C;
        const double tiny = 1e-14 * scale;
        if (std::abs(a2) <= tiny) {
            if (std::abs(a1) > tiny) {
                ws.root_candidates.push_back(wrap_two_pi(2.0 * std::atan(-a0 / a1)));
            }
            ws.root_candidates.push_back(kPi);  // the t -> inf branch
        } else {
            const double disc = a1 * a1 - 4.0 * a2 * a0;
            if (disc >= 0.0) {
                const double sq = std::sqrt(disc);
                ws.root_candidates.push_back(
                    wrap_two_pi(2.0 * std::atan((-a1 + sq) / (2.0 * a2))));
                ws.root_candidates.push_back(
                    wrap_two_pi(2.0 * std::atan((-a1 - sq) / (2.0 * a2))));
            }
        }
    }
    return ws;
}

}  // namespace

double ElementWorkspace::f_at(double theta) const {
    const double c = std::cos(theta), s = std::sin(theta);
    const double num = c0 - 2.0 * (y12.real() * c + y12.imag() * s);
    const double den = d0 - 2.0 * (x12.real() * c + x12.imag() * s);
    return trace_const_inv - num / den;
}

ElementWorkspace assemble_element_workspace(const ChannelSet& ch,
                                            std::span<const double> p,
                                            const PhaseConfig& q, int j) {
    const std::vector<cx> ph = q.phasors();
    CMat w_refl = reflected_channel(ch, ph);
    for (int k = 0; k < w_refl.rows(); ++k) {
        const double pk = p[static_cast<std::size_t>(k)];
        if (!(pk > 0.0)) {
            throw SingularMatrix("reflected-only form needs positive powers");
        }
        const double inv_sqrt = 1.0 / std::sqrt(pk);
        for (int t = 0; t < w_refl.cols(); ++t) w_refl.at(k, t) *= inv_sqrt;
    }
    return assemble_from_reflected(ch, p, w_refl, q, j);
}

double closed_form_phase(const ElementWorkspace& ws) {
    double best_theta = ws.incumbent_theta;
    double best_f = std::numeric_limits<double>::infinity();
    bool found = false;
    for (double theta : ws.root_candidates) {
        const double f = ws.f_at(theta);
        if (std::isfinite(f) && f > 0.0 && f < best_f) {
            best_f = f;
            best_theta = theta;
            found = true;
        }
    }
    return found ? best_theta : ws.incumbent_theta;
}

double best_discrete_phase(int j, const ChannelSet& ch,
                           std::span<const double> p, const PhaseConfig& q) {
    SweepEngine eng(ch, p, q, /*include_direct=*/true);
    const cx q_old{std::cos(q.theta[static_cast<std::size_t>(j)]),
                   std::sin(q.theta[static_cast<std::size_t>(j)])};
    const double step = q.grid_step();
    CMat ginv_tmp;
    int best_i = 0;
    double best_f = std::numeric_limits<double>::infinity();
    for (int i = 0; i < q.grid_size(); ++i) {
        const double theta = static_cast<double>(i) * step;
        const cx cand{std::cos(theta), std::sin(theta)};
        const double f = eng.score_candidate(j, q_old, cand, ginv_tmp);
        if (f < best_f) {
            best_f = f;
            best_i = i;
        }
    }
    return static_cast<double>(best_i) * step;
}

SweepResult analog_sweep(const ChannelSet& ch, std::span<const double> p,
                         const PhaseConfig& q0, const SweepOptions& opts) {
    SweepResult out;
    out.q = q0;
    const int n_elem = q0.size();
    if (n_elem == 0) {
        out.f_initial = out.f_final =
            objective_f(ch, p, q0, /*include_direct=*/true);
        return out;
    }

    SweepEngine eng(ch, p, out.q, /*include_direct=*/true);
    out.f_initial = eng.f();

    double guard_viol = 0.0;
    const bool use_guard = opts.guard.has_value();
    if (use_guard) {
        guard_viol = eng.budget_violation(eng.ginv(), eng.h(), *opts.guard);
    }

    // Scaled reflected channel for the closed-form modes, kept in sync.
    const bool closed_form_mode = opts.mode != AnalogUpdate::Enumerate;
    CMat w_refl;
    std::vector<double> inv_sqrt_p;
    if (closed_form_mode) {
        w_refl = reflected_channel(ch, out.q.phasors());
        inv_sqrt_p.resize(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!(p[k] > 0.0)) {
                throw SingularMatrix("reflected-only form needs positive powers");
            }
            inv_sqrt_p[k] = 1.0 / std::sqrt(p[k]);
            for (int t = 0; t < w_refl.cols(); ++t) {
                w_refl.at(static_cast<int>(k), t) *= inv_sqrt_p[k];
            }
        }
    }

    const auto& kn = simd::active();
    CMat ginv_cand;
    for (int pass = 0; pass < opts.max_passes; ++pass) {
        // Fresh factorization once per pass to cap rounding drift.
        eng.rebuild(out.q);
        const double f_pass_start = eng.f();
        out.passes = pass + 1;

        for (int j = 0; j < n_elem; ++j) {
            const double theta_old = out.q.theta[static_cast<std::size_t>(j)];
            const cx q_old{std::cos(theta_old), std::sin(theta_old)};

            double theta_new = theta_old;
            int idx_new = out.q.bits > 0 ? out.q.idx[static_cast<std::size_t>(j)] : 0;
            double f_new = eng.f();
            bool have_candidate = false;

            if (opts.mode == AnalogUpdate::Enumerate) {
                const double step = out.q.grid_step();
                double best_f = std::numeric_limits<double>::infinity();
                CMat ginv_best;
                for (int i = 0; i < out.q.grid_size(); ++i) {
                    const double theta = static_cast<double>(i) * step;
                    const cx cand{std::cos(theta), std::sin(theta)};
                    const double f = eng.score_candidate(j, q_old, cand, ginv_cand);
                    if (f < best_f) {
                        best_f = f;
                        theta_new = theta;
                        idx_new = i;
                        ginv_best = ginv_cand;
                    }
                }
                ginv_cand = std::move(ginv_best);
                f_new = best_f;
                have_candidate = idx_new != out.q.idx[static_cast<std::size_t>(j)];
            } else {
                const ElementWorkspace ws =
                    assemble_from_reflected(ch, p, w_refl, out.q, j);
                double theta_star = closed_form_phase(ws);
                if (opts.mode == AnalogUpdate::ClosedFormQuantized) {
                    theta_star = quantize_phase(theta_star, out.q.bits);
                    idx_new = quantize_index(theta_star, out.q.bits);
                }
                theta_new = theta_star;
                const cx cand{std::cos(theta_new), std::sin(theta_new)};
                f_new = eng.score_candidate(j, q_old, cand, ginv_cand);
                have_candidate = theta_new != theta_old;
            }

            bool accept = have_candidate && f_new <= eng.f();
            if (accept && use_guard) {
                // Candidate effective channel for the violation check.
                CMat h_cand = eng.h();
                const cx delta =
                    cx{std::cos(theta_new), std::sin(theta_new)} - q_old;
                for (int k = 0; k < h_cand.rows(); ++k) {
                    kn.axpy(delta * ch.h_ru_h.at(k, j), ch.h_br.row(j),
                            h_cand.row(k), static_cast<std::size_t>(h_cand.cols()));
                }
                const double viol =
                    eng.budget_violation(ginv_cand, h_cand, *opts.guard);
                if (viol > guard_viol + 1e-9 * (1.0 + opts.guard->budget_w)) {
                    accept = false;
                } else {
                    guard_viol = viol;
                }
            }

            if (accept) {
                const cx cand{std::cos(theta_new), std::sin(theta_new)};
                eng.accept(j, q_old, cand, f_new, std::move(ginv_cand));
                if (closed_form_mode) {
                    const cx delta = cand - q_old;
                    for (int k = 0; k < w_refl.rows(); ++k) {
                        kn.axpy(delta * ch.h_ru_h.at(k, j) *
                                    inv_sqrt_p[static_cast<std::size_t>(k)],
                                ch.h_br.row(j), w_refl.row(k),
                                static_cast<std::size_t>(w_refl.cols()));
                    }
                }
                if (out.q.bits > 0) {
                    out.q.set_discrete(j, idx_new);
                } else {
                    out.q.set_angle(j, theta_new);
                }
                ++out.updates;
            }
            out.f_trace.push_back(eng.f());
        }

        if (f_pass_start - eng.f() <= opts.rho) break;
    }
    out.f_final = eng.f();
    return out;
}

}  // namespace rcf
