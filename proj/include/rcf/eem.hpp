#pragma once

#include <optional>

#include "rcf/analog_bf.hpp"
#include "rcf/channel.hpp"
#include "rcf/digital_bf.hpp"
#include "rcf/power_metrics.hpp"

namespace rcf {

struct EEReport {
    // Objective value after each outer iteration, bits/J: B * rate / power
    // with the transmit term taken from the current zero-forcing state.
    std::vector<double> eta_trace;
    RateReport final_rates;
    PowerBreakdown final_power;
    double final_eta = 0.0;  // bits/J
    int iterations = 0;
    bool converged = false;
    PhaseConfig phase_state;
    BeamformerState beam_state;
};

struct EEMOptions {
    // Warm start for re-running from a converged state; stays empty for a
    // fresh run (equal-power digital initialization).
    std::optional<BeamformerState> init_beam;
};

// Alternates the digital power allocation and the per-element phase sweep
// until the efficiency moves by <= epsilon (measured on eta / bandwidth) or
// max_outer iterations.
EEReport run_eem(const SystemConfig& cfg, const ChannelSet& ch,
                 const PhaseConfig& init_phase, const EEMOptions& opts = {});

// Uniform draw over the b-bit grid (or over [0, 2pi) when continuous).
PhaseConfig init_random_phase(const SystemConfig& cfg, std::uint64_t seed);

std::string ee_report_to_json(const EEReport& report);

}  // namespace rcf
