#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rcf/channel.hpp"
#include "rcf/numerics.hpp"
#include "rcf/types.hpp"

namespace rcf {

// Phase-shift state of all M*L elements. Discrete mode stores the grid index
// per element (bit-exact), the angle is derived; bits == 0 means continuous.
struct PhaseConfig {
    int bits = 3;
    std::vector<int> idx;      // discrete mode only
    std::vector<double> theta; // radians in [0, 2pi)

    bool continuous() const { return bits == 0; }
    int size() const { return static_cast<int>(theta.size()); }
    int grid_size() const { return 1 << bits; }
    double grid_step() const { return 3.14159265358979323846 / (1 << (bits - 1)); }

    static PhaseConfig from_indices(int bits, std::vector<int> idx);
    static PhaseConfig from_angles(std::vector<double> theta);  // continuous
    static PhaseConfig zeros(int n_elements, int bits);

    void set_discrete(int j, int grid_index);
    void set_angle(int j, double theta_rad);  // continuous mode
    std::vector<cx> phasors() const;
};

// Transmit power Tr(V_D^H V_D) of the ZF beamformer for allocation p on the
// effective channel (include_direct) or on the reflected-only channel.
double objective_f(const ChannelSet& ch, std::span<const double> p,
                   const PhaseConfig& q, bool include_direct);

// Reflected-only channel H_RU^H diag(q) H_BR.
CMat reflected_channel(const ChannelSet& ch, const std::vector<cx>& phasors);

// Exact per-element minimizer of the full objective over the 2^b phase grid,
// all other elements held fixed. Rank-one inverse updates give O(K^2) work
// per candidate; ties resolve to the smaller grid index.
double best_discrete_phase(int j, const ChannelSet& ch,
                           std::span<const double> p, const PhaseConfig& q);

// Nearest grid point under circular distance; exact ties take the smaller
// index. Returns the grid angle (use quantize_index for the index itself).
double quantize_phase(double theta, int bits);
int quantize_index(double theta, int bits);

// Per-element workspace of the reflected-only objective, with the rank-one
// element contribution split out. The objective as a function of this
// element's phase reduces to
//   f(theta) = trace_const_inv - N(theta) / D(theta)
// with N, D first-order trigonometric polynomials, so the stationarity
// condition is coef_sin*sin + coef_cos*cos + coef_const = 0, solved through
// the tan(theta/2) substitution.
struct ElementWorkspace {
    int j = 0;
    double incumbent_theta = 0.0;
    std::vector<cx> u;  // user-side column, power-scaled
    std::vector<cx> r;  // BS-side row
    std::vector<cx> w;  // base * conj(r)
    CMat base;          // reflected channel with element j zeroed
    CMat const_term;    // base*base^H + |r|^2 u u^H
    CMat cross_term;    // u w^H (coefficient of e^{j theta})
    CMat const_inv;
    double trace_const_inv = 0.0;
    double x11 = 0.0, x22 = 0.0, y11 = 0.0, y22 = 0.0;
    cx x12, y12;
    double c0 = 0.0, d0 = 0.0;
    double coef_sin = 0.0, coef_cos = 0.0, coef_const = 0.0;
    std::vector<double> root_candidates;  // stationary angles in [0, 2pi)

    double f_at(double theta) const;
};

// Builds the workspace from scratch. Throws SingularMatrix when the
// reflected-only objective is not defined (rank-deficient base).
ElementWorkspace assemble_element_workspace(const ChannelSet& ch,
                                            std::span<const double> p,
                                            const PhaseConfig& q, int j);

// Continuous minimizer over this element's phase: evaluates the reflected
// objective at every stationary candidate and returns the smallest. With no
// real stationary root (flat or degenerate objective) the incumbent phase is
// returned unchanged.
double closed_form_phase(const ElementWorkspace& ws);

struct SweepOptions {
    AnalogUpdate mode = AnalogUpdate::Enumerate;
    int max_passes = 20;
    double rho = 1e-3;
    struct BudgetGuard {
        int n_bs = 0;
        int n_ant = 0;
        double budget_w = 0.0;
    };
    // When set, an element update is also required not to increase the worst
    // per-BS budget violation of the implied ZF beamformer.
    std::optional<BudgetGuard> guard;
};

struct SweepResult {
    PhaseConfig q;
    double f_initial = 0.0;
    double f_final = 0.0;
    int passes = 0;
    long updates = 0;              // accepted element changes
    std::vector<double> f_trace;   // f after each element visit
};

// Sequential coordinate descent over all elements, repeated until a full
// pass improves f by <= rho or max_passes is hit. f is non-increasing across
// every accepted update.
SweepResult analog_sweep(const ChannelSet& ch, std::span<const double> p,
                         const PhaseConfig& q0, const SweepOptions& opts);

}  // namespace rcf
