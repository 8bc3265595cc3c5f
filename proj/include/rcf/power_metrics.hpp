#pragma once

#include <vector>

#include "rcf/channel.hpp"
#include "rcf/types.hpp"

namespace rcf {

struct PowerBreakdown {
    std::vector<double> transmit_per_bs;  // p_t per BS, W
    double amplifier_weighted = 0.0;      // sum of amp_loss * p_t, W
    double static_bs = 0.0;
    double static_ris = 0.0;
    double static_users = 0.0;
    double total = 0.0;
};

struct RateReport {
    std::vector<double> per_user;      // bits/s/Hz
    std::vector<double> sinr_per_user; // linear
    double sum = 0.0;                  // bits/s/Hz
};

// SINR_k = |H_k v_k|^2 / (sum_{k' != k} |H_k v_k'|^2 + noise).
// Handles arbitrary (not only zero-forcing) beamformers.
RateReport user_rates(const CMat& h_eff, const CMat& v_d, double noise_w);

// Per-BS transmit powers are the squared Frobenius norms of the row blocks
// of V_D; statics come straight from the config.
PowerBreakdown total_power(const SystemConfig& cfg, const CMat& v_d);

// bits per Joule.
double energy_efficiency(const RateReport& rates, const PowerBreakdown& power,
                         double bandwidth_hz);

}  // namespace rcf
