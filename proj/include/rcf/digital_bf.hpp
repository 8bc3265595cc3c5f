#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcf/channel.hpp"
#include "rcf/numerics.hpp"
#include "rcf/types.hpp"

namespace rcf {

struct BeamformerState {
    CMat zf_directions;               // T x K, H^H (H H^H)^{-1}
    std::vector<double> power_alloc;  // received power per user, W
    CMat v_d;                         // zf_directions * diag(sqrt(p))
    double y = 0.0;                   // quadratic-transform auxiliary
    double ratio = 0.0;               // rate / (amp_loss * P_tx + P_static)
    double initial_ratio = 0.0;       // ratio at the starting allocation
    int iterations = 0;               // Dinkelbach outer iterations
};

// H^H (H H^H)^{-1}; throws RankDeficient if the Gram factorization fails.
CMat zf_directions(const CMat& h);

// Zero-forcing beamformer with per-user received powers p. Verifies
// H V = diag(sqrt(p)) to 1e-8 and throws RankDeficient otherwise.
BeamformerState zf_beamformer(const CMat& h, std::span<const double> p);

// Squared Frobenius norm of the n-th row block (one BS) of V_D.
double per_bs_power(const CMat& v_d, int n, int n_bs, int n_ant);

// Fractional program data: maximize
//   sum_k log2(1 + p_k / noise) / (amp_loss * sum_k weights_k p_k + static_w)
// subject to p >= 0 and constraint_diag[c] . p <= budgets[c].
// weights empty means all-ones (the unweighted textbook form).
struct PowerProblem {
    std::vector<std::vector<double>> constraint_diag;
    std::vector<double> budgets;
    std::vector<double> weights;
    double noise_w = 1e-12;
    double amp_loss = 1.0;
    double static_w = 1.0;
    double rho = 1e-3;
    int max_inner = 10000;

    int n_vars() const {
        return constraint_diag.empty()
                   ? 0
                   : static_cast<int>(constraint_diag.front().size());
    }
    double rate(std::span<const double> p) const;
    double denom(std::span<const double> p) const;
    double ratio(std::span<const double> p) const;
};

// Concave subproblem at fixed auxiliary y:
//   maximize 2 y sqrt(rate(p)) - y^2 denom(p)  over the constraint polytope.
// Projected gradient with backtracking; the projection is Dykstra's
// alternating scheme on the orthant/half-space intersection.
// Throws InfeasibleBudget if any budget <= 0, NonConvergence past max_inner.
std::vector<double> dinkelbach_inner(double y, const PowerProblem& prob,
                                     std::span<const double> warm = {});

struct AllocationResult {
    std::vector<double> p;
    double y = 0.0;
    double ratio = 0.0;
    int iterations = 0;
    std::vector<double> ratio_trace;  // accepted ratio per outer iteration
};

// Alternates the y fixpoint (y = sqrt(rate)/denom) with the inner solve until
// the ratio moves by <= rho. The accepted iterate sequence is non-decreasing
// by construction (a worse inner solve keeps the incumbent and stops).
AllocationResult dinkelbach_solve(const PowerProblem& prob,
                                  std::span<const double> warm = {});

struct DigitalOptions {
    std::vector<double> warm_p;             // optional warm start
    std::optional<double> total_budget_w;   // single-sum budget instead of per-BS
    std::optional<double> static_power_w;   // defaults to cfg.static_power_w()
    bool weighted_denominator = true;       // w_k = |v~_k|^2 (true transmit power)
};

// Full digital stage: ZF directions from H, per-BS budget rows from the
// direction blocks, Dinkelbach power allocation, final V_D assembly.
BeamformerState dinkelbach_power_allocation(const CMat& h,
                                            const SystemConfig& cfg,
                                            const DigitalOptions& opts = {});

// Budget rows [G_n]_kk for each BS block of the ZF directions.
std::vector<std::vector<double>> per_bs_constraint_diag(const CMat& dirs,
                                                        int n_bs, int n_ant);

}  // namespace rcf
