#include "rcf/digital_bf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rcf {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::vector<double> column_norms_sq(const CMat& m) {
    std::vector<double> out(static_cast<std::size_t>(m.cols()), 0.0);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            out[static_cast<std::size_t>(j)] += std::norm(m.at(i, j));
        }
    }
    return out;
}

}  // namespace

CMat zf_directions(const CMat& h) {
    CMat ginv;
    try {
        ginv = hermitian_inverse(gram(h));
    } catch (const Error&) {
        throw RankDeficient("channel Gram matrix is numerically singular");
    }
    return matmul(adjoint(h), ginv);
}

BeamformerState zf_beamformer(const CMat& h, std::span<const double> p) {
    BeamformerState st;
    st.zf_directions = zf_directions(h);
    st.power_alloc.assign(p.begin(), p.end());
    st.v_d = st.zf_directions;
    for (int i = 0; i < st.v_d.rows(); ++i) {
        for (int j = 0; j < st.v_d.cols(); ++j) {
            st.v_d.at(i, j) *= std::sqrt(p[static_cast<std::size_t>(j)]);
        }
    }
    // Spot-check the zero-forcing identity H V = diag(sqrt(p)).
    const CMat hv = matmul(h, st.v_d);
    double max_sqrt_p = 0.0;
    for (double v : p) max_sqrt_p = std::max(max_sqrt_p, std::sqrt(v));
    const double tol = 1e-8 * std::max(1.0, max_sqrt_p);
    for (int i = 0; i < hv.rows(); ++i) {
        for (int j = 0; j < hv.cols(); ++j) {
            const cx want = (i == j)
                ? cx{std::sqrt(p[static_cast<std::size_t>(j)]), 0.0}
                : cx{0.0, 0.0};
            if (std::abs(hv.at(i, j) - want) > tol) {
                throw RankDeficient("zero-forcing residual above tolerance");
            }
        }
    }
    return st;
}

double per_bs_power(const CMat& v_d, int n, int n_bs, int n_ant) {
    if (v_d.rows() != n_bs * n_ant || n < 0 || n >= n_bs) {
        throw BlockMismatch("beamformer rows do not match the BS partition");
    }
    const auto& k = simd::active();
    double acc = 0.0;
    for (int r = n * n_ant; r < (n + 1) * n_ant; ++r) {
        acc += k.sum_abs2(v_d.row(r), static_cast<std::size_t>(v_d.cols()));
    }
    return acc;
}

std::vector<std::vector<double>> per_bs_constraint_diag(const CMat& dirs,
                                                        int n_bs, int n_ant) {
    if (dirs.rows() != n_bs * n_ant) {
        throw BlockMismatch("direction rows do not match the BS partition");
    }
    std::vector<std::vector<double>> g(static_cast<std::size_t>(n_bs));
    for (int n = 0; n < n_bs; ++n) {
        auto& row = g[static_cast<std::size_t>(n)];
        row.assign(static_cast<std::size_t>(dirs.cols()), 0.0);
        for (int r = n * n_ant; r < (n + 1) * n_ant; ++r) {
            for (int c = 0; c < dirs.cols(); ++c) {
                row[static_cast<std::size_t>(c)] += std::norm(dirs.at(r, c));
            }
        }
    }
    return g;
}

double PowerProblem::rate(std::span<const double> p) const {
    double acc = 0.0;
    for (double v : p) acc += std::log2(1.0 + v / noise_w);
    return acc;
}

double PowerProblem::denom(std::span<const double> p) const {
    double tx = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double w = weights.empty() ? 1.0 : weights[k];
        tx += w * p[k];
    }
    return amp_loss * tx + static_w;
}

double PowerProblem::ratio(std::span<const double> p) const {
    return rate(p) / denom(p);
}

namespace {

// Dykstra's alternating projection onto {x >= 0} cap {a_c . x <= b_c}.
class PolytopeProjector {
public:
    PolytopeProjector(const std::vector<std::vector<double>>& rows,
                      const std::vector<double>& budgets)
        : rows_(rows), budgets_(budgets) {
        norms_sq_.reserve(rows.size());
        for (const auto& r : rows) {
            double s = 0.0;
            for (double v : r) s += v * v;
            norms_sq_.push_back(s);
        }
    }

    void project(std::vector<double>& x) const {
        const std::size_t n = x.size();
        const std::size_t n_sets = rows_.size() + 1;
        std::vector<std::vector<double>> corr(
            n_sets, std::vector<double>(n, 0.0));
        std::vector<double> prev(n);
        for (int cycle = 0; cycle < 1000; ++cycle) {
            prev = x;
            for (std::size_t s = 0; s < n_sets; ++s) {
                auto& c = corr[s];
                for (std::size_t i = 0; i < n; ++i) x[i] += c[i];
                std::vector<double> before = x;
                if (s == 0) {
                    for (double& v : x) v = std::max(v, 0.0);
                } else {
                    const std::size_t r = s - 1;
                    if (norms_sq_[r] > 0.0) {
                        double dot = 0.0;
                        for (std::size_t i = 0; i < n; ++i) {
                            dot += rows_[r][i] * x[i];
                        }
                        const double excess = dot - budgets_[r];
                        if (excess > 0.0) {
                            const double t = excess / norms_sq_[r];
                            for (std::size_t i = 0; i < n; ++i) {
                                x[i] -= t * rows_[r][i];
                            }
                        }
                    }
                }
                for (std::size_t i = 0; i < n; ++i) c[i] = before[i] - x[i];
            }
            double delta = 0.0, scale = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                delta = std::max(delta, std::abs(x[i] - prev[i]));
                scale = std::max(scale, std::abs(x[i]));
            }
            if (delta <= 1e-14 * scale) break;
        }
        // Snap the residual negatives introduced by the half-space steps.
        for (double& v : x) v = std::max(v, 0.0);
    }

private:
    const std::vector<std::vector<double>>& rows_;
    const std::vector<double>& budgets_;
    std::vector<double> norms_sq_;
};

struct ScaledProblem {
    std::vector<double> scale;                    // p = scale . x
    std::vector<std::vector<double>> rows;        // scaled constraint rows
    std::vector<double> budgets;
};

ScaledProblem build_scaled(const PowerProblem& prob) {
    const std::size_t n = static_cast<std::size_t>(prob.n_vars());
    ScaledProblem sp;
    sp.scale.assign(n, 0.0);
    // Per-variable scale from the tightest constraint; keeps the iterate
    // space O(1) despite path-loss magnitudes.
    for (std::size_t k = 0; k < n; ++k) {
        double s = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < prob.constraint_diag.size(); ++c) {
            const double g = prob.constraint_diag[c][k];
            if (g > 0.0) {
                s = std::min(s, prob.budgets[c] / (static_cast<double>(n) * g));
            }
        }
        if (!std::isfinite(s)) s = prob.budgets.empty() ? 1.0 : prob.budgets[0];
        sp.scale[k] = s;
    }
    sp.rows.resize(prob.constraint_diag.size());
    for (std::size_t c = 0; c < prob.constraint_diag.size(); ++c) {
        sp.rows[c].resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            sp.rows[c][k] = prob.constraint_diag[c][k] * sp.scale[k];
        }
    }
    sp.budgets = prob.budgets;
    return sp;
}

double objective(double y, const PowerProblem& prob,
                 std::span<const double> p) {
    return 2.0 * y * std::sqrt(std::max(prob.rate(p), 0.0)) -
           y * y * prob.denom(p);
}

}  // namespace

std::vector<double> dinkelbach_inner(double y, const PowerProblem& prob,
                                     std::span<const double> warm) {
    for (double b : prob.budgets) {
        if (b <= 0.0) {
            throw InfeasibleBudget("transmit budget must be positive");
        }
    }
    const std::size_t n = static_cast<std::size_t>(prob.n_vars());
    if (y <= 0.0) {
        // Objective is identically zero at y = 0; the penalized limit selects
        // the zero allocation.
        return std::vector<double>(n, 0.0);
    }

    const ScaledProblem sp = build_scaled(prob);
    PolytopeProjector proj(sp.rows, sp.budgets);

    std::vector<double> x(n, 1.0);
    if (!warm.empty()) {
        for (std::size_t k = 0; k < n; ++k) {
            x[k] = sp.scale[k] > 0.0 ? warm[k] / sp.scale[k] : 0.0;
        }
    }
    proj.project(x);

    std::vector<double> p(n), grad(n), x_try(n), p_try(n), best_x = x;

    auto to_p = [&](const std::vector<double>& xv, std::vector<double>& pv) {
        for (std::size_t k = 0; k < n; ++k) pv[k] = sp.scale[k] * xv[k];
    };
    to_p(x, p);
    double f_cur = objective(y, prob, p);
    double f_best = f_cur;

    double step = 1.0;
    int it = 0;
    for (; it < prob.max_inner; ++it) {
        const double sr = std::sqrt(std::max(prob.rate(p), 1e-300));
        for (std::size_t k = 0; k < n; ++k) {
            const double w = prob.weights.empty() ? 1.0 : prob.weights[k];
            const double drate = 1.0 / ((prob.noise_w + p[k]) * kLn2);
            grad[k] = sp.scale[k] *
                      (y * drate / std::max(sr, 1e-12) -
                       y * y * prob.amp_loss * w);
        }

        // Backtracking on the projected step.
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t k = 0; k < n; ++k) x_try[k] = x[k] + step * grad[k];
            proj.project(x_try);
            double dist_sq = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = x_try[k] - x[k];
                dist_sq += d * d;
            }
            if (dist_sq == 0.0) break;
            to_p(x_try, p_try);
            const double f_try = objective(y, prob, p_try);
            if (f_try > f_cur) {
                x = x_try;
                p = p_try;
                f_cur = f_try;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (f_cur > f_best) {
            f_best = f_cur;
            best_x = x;
        }
        if (moved) {
            step = std::min(step * 2.0, 1e6);
        }

        // Unit-step projected-gradient residual as the KKT measure.
        for (std::size_t k = 0; k < n; ++k) x_try[k] = x[k] + grad[k];
        proj.project(x_try);
        double res = 0.0, xs = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            res = std::max(res, std::abs(x_try[k] - x[k]));
            xs = std::max(xs, std::abs(x[k]));
        }
        if (res <= 1e-2 * prob.rho * xs) break;   // comfortably inside tolerance
        if (!moved) {
            if (res <= prob.rho * xs) break;      // stalled but within tolerance
            throw NonConvergence(
                "projected gradient stalled away from the KKT point");
        }
    }
    if (it >= prob.max_inner) {
        throw NonConvergence("inner projected gradient exhausted max_inner");
    }

    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = sp.scale[k] * best_x[k];
    return out;
}

AllocationResult dinkelbach_solve(const PowerProblem& prob,
                                  std::span<const double> warm) {
    const std::size_t n = static_cast<std::size_t>(prob.n_vars());
    std::vector<double> p;
    if (!warm.empty()) {
        p.assign(warm.begin(), warm.end());
    } else {
        // Equal power, feasible by construction.
        double p0 = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < prob.constraint_diag.size(); ++c) {
            double gmax = 0.0;
            for (double g : prob.constraint_diag[c]) gmax = std::max(gmax, g);
            if (gmax > 0.0) {
                p0 = std::min(p0, prob.budgets[c] /
                                      (static_cast<double>(n) * gmax));
            }
        }
        if (!std::isfinite(p0)) p0 = 0.0;
        p.assign(n, p0);
    }

    AllocationResult res;
    res.p = p;
    res.ratio = prob.ratio(p);
    res.y = std::sqrt(std::max(prob.rate(p), 0.0)) / prob.denom(p);
    res.ratio_trace.push_back(res.ratio);

    double prev_ratio = res.ratio;
    for (int it = 1; it <= 100; ++it) {
        const double y = std::sqrt(std::max(prob.rate(p), 0.0)) / prob.denom(p);
        std::vector<double> p_try = dinkelbach_inner(y, prob, p);
        const double r_try = prob.ratio(p_try);
        res.iterations = it;
        if (r_try > res.ratio) {
            res.ratio = r_try;
            res.p = p_try;
            res.y = y;
        }
        if (r_try >= prev_ratio) {
            p = std::move(p_try);
        }  // else keep incumbent; trace stays monotone
        res.ratio_trace.push_back(std::max(prev_ratio, r_try));
        if (std::abs(r_try - prev_ratio) <= prob.rho) break;
        if (r_try < prev_ratio) break;  // solver noise; no further progress
        prev_ratio = r_try;
    }
    return res;
}

BeamformerState dinkelbach_power_allocation(const CMat& h,
                                            const SystemConfig& cfg,
                                            const DigitalOptions& opts) {
    const int n_users = h.rows();
    const CMat dirs = zf_directions(h);

    PowerProblem prob;
    prob.noise_w = cfg.noise_w;
    prob.amp_loss = cfg.amp_loss;
    prob.static_w = opts.static_power_w.value_or(cfg.static_power_w());
    prob.rho = cfg.rho;
    if (opts.total_budget_w.has_value()) {
        std::vector<double> g(static_cast<std::size_t>(n_users), 0.0);
        for (int i = 0; i < dirs.rows(); ++i) {
            for (int j = 0; j < dirs.cols(); ++j) {
                g[static_cast<std::size_t>(j)] += std::norm(dirs.at(i, j));
            }
        }
        prob.constraint_diag.push_back(std::move(g));
        prob.budgets.push_back(*opts.total_budget_w);
    } else {
        prob.constraint_diag = per_bs_constraint_diag(dirs, cfg.n_bs, cfg.n_ant);
        prob.budgets.assign(static_cast<std::size_t>(cfg.n_bs), cfg.pt_w);
    }
    if (opts.weighted_denominator) {
        prob.weights = column_norms_sq(dirs);
    }

    BeamformerState st;
    st.zf_directions = dirs;
    const double min_budget =
        *std::min_element(prob.budgets.begin(), prob.budgets.end());
    if (min_budget == 0.0) {
        // Zero budget: the only feasible allocation is zero power.
        st.power_alloc.assign(static_cast<std::size_t>(n_users), 0.0);
        st.v_d = CMat(h.cols(), n_users);
        st.y = 0.0;
        st.ratio = 0.0;
        st.iterations = 0;
        return st;
    }

    const AllocationResult res = dinkelbach_solve(
        prob, std::span<const double>(opts.warm_p));
    st.initial_ratio = res.ratio_trace.front();
    st.power_alloc = res.p;
    st.v_d = dirs;
    for (int i = 0; i < st.v_d.rows(); ++i) {
        for (int j = 0; j < st.v_d.cols(); ++j) {
            st.v_d.at(i, j) *= std::sqrt(res.p[static_cast<std::size_t>(j)]);
        }
    }
    st.y = res.y;
    st.ratio = res.ratio;
    st.iterations = res.iterations;
    return st;
}

}  // namespace rcf
