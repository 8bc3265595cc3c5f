#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcf/errors.hpp"
#include "rcf/types.hpp"

namespace rcf {

inline double dbm_to_w(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
inline double dbw_to_w(double dbw) { return std::pow(10.0, dbw / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w * 1e3); }

enum class AnalogUpdate { Enumerate, ClosedFormQuantized, Continuous };

// All scalar system parameters. Power fields are linear watts; dB values are
// converted at the config boundary.
struct SystemConfig {
    int n_bs = 4;               // N
    int n_ant = 8;              // N_a, antennas per BS
    int n_users = 8;            // K
    int n_ris = 3;              // M
    int ris_elements = 64;      // L
    int phase_bits = 3;         // b; 0 means continuous phases
    double bandwidth_hz = 10e6;
    double noise_w = dbm_to_w(-90.0);
    double rician_kappa = 4.0;  // linear ratio
    double carrier_hz = 5.9e9;
    double bs_radius_m = 150.0;
    double user_radius_m = 20.0;
    double bs_antenna_spacing_m = 1.0;
    double ris_element_size_m = 0.02;
    double pt_w = dbm_to_w(30.0);    // per-BS transmit budget
    double amp_loss = 1.0;           // amplifier loss factor (omega)
    double pb_w = dbw_to_w(10.0);    // per-BS static power
    double pr_w = dbm_to_w(15.0);    // per-RIS-element static power (keyed by bits)
    double pu_w = dbm_to_w(10.0);    // per-user static power
    double das_antenna_w = dbm_to_w(20.0);  // per distributed antenna (DAS benchmark)
    double epsilon = 1e-3;           // outer loop threshold (on eta/B)
    double rho = 1e-3;               // Dinkelbach threshold (on the ratio)
    std::uint64_t seed = 0;
    int max_outer = 50;
    AnalogUpdate analog_update = AnalogUpdate::Enumerate;

    bool continuous_phases() const { return phase_bits == 0; }
    int total_elements() const { return n_ris * ris_elements; }
    int total_antennas() const { return n_bs * n_ant; }
    double static_power_w() const {
        return n_bs * pb_w + static_cast<double>(total_elements()) * pr_w +
               n_users * pu_w;
    }

    // Table mapping quantization bits to per-element static power.
    static double element_power_for_bits(int bits);

    // Throws ConfigError on violated invariants (K <= N*N_a, positivity, ...).
    void validate() const;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

struct Topology {
    std::vector<Vec2> bs_positions;
    std::vector<Vec2> ris_positions;
    std::vector<Vec2> user_positions;
};

// The three channel blocks. h_ru_h is stored in its K x (M*L) orientation,
// i.e. the form that multiplies from the left in the composed channel.
struct ChannelSet {
    CMat h_d;      // K x (N*N_a)
    CMat h_br;     // (M*L) x (N*N_a)
    CMat h_ru_h;   // K x (M*L)
};

Topology generate_topology(const SystemConfig& cfg, std::uint64_t seed);

// 10^(-PL/10) with PL = 28.0 + 22 log10(d_m) + 20 log10(f_GHz), d clamped to 1 m.
double path_loss_linear(double distance_m, double carrier_freq_hz);

ChannelSet generate_channels(const Topology& topo, const SystemConfig& cfg,
                             std::uint64_t seed);

class PhaseConfig;  // defined in analog_bf.hpp

// H = H_D + H_RU^H diag(q) H_BR
CMat effective_channel(const ChannelSet& ch, const std::vector<cx>& phasors);

// RMS of off-diagonal magnitudes of (1/(M*L)) * H_BR^H H_BR.
double hardening_metric(const ChannelSet& ch);
double hardening_metric(const CMat& h_br);

// Antenna / element coordinates, exposed for the DAS benchmark and tests.
std::vector<Vec2> bs_antenna_positions(const Vec2& center, int n_ant,
                                       double spacing_m);
std::vector<Vec2> ris_element_positions(const Vec2& center, int n_elements,
                                        double pitch_m);

// JSON dump/load for regression fixtures (complex entries as [re, im]).
std::string channel_set_to_json(const ChannelSet& ch);
ChannelSet channel_set_from_json(const std::string& text);

}  // namespace rcf
