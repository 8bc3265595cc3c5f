#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rcf/channel.hpp"

namespace rcf {

// Closed-form efficiency curves in the high-SNR regime and their exact
// derivatives. Each derivative is the analytic differential of its paired
// eta expression, so central finite differences reproduce it to rounding.

// --- transmit-power curve -------------------------------------------------
struct Prop1Params {
    double bandwidth_hz = 10e6;
    double amp_loss = 1.0;
    double noise_w = 1e-12;
    double static_w = 47.0;
};

double prop1_eta(double p_sum_w, const Prop1Params& prm);
// d eta / d p_sum, evaluated as molecule/denominator.
double prop1_derivative(double p_sum_w, const Prop1Params& prm);
double prop1_molecule(double p_sum_w, const Prop1Params& prm);

// --- RIS-count curve (total BS+RIS count held fixed) ------------------------
struct Prop2Params {
    double bandwidth_hz = 10e6;
    double amp_loss = 1.0;
    double noise_w = 1e-12;
    double pb_w = 10.0;
    double pr_w = 0.0316227766016838;
    double pu_w = 0.1;
    int n_users = 8;
    int n_total = 10;                    // N0 = N + M
    int ris_elements = 64;               // L
    std::vector<double> per_user_tx_w;   // reference per-user transmit powers
};

double prop2_eta(double m, const Prop2Params& prm);
double prop2_derivative(double m, const Prop2Params& prm);
// The non-positive log term of the derivative molecule.
double prop2_term3(double m, const Prop2Params& prm);

// --- RIS-size curve ---------------------------------------------------------
struct Prop3Params {
    double bandwidth_hz = 10e6;
    double amp_loss = 1.0;
    double noise_w = 1e-12;
    double pb_w = 10.0;
    double pr_w = 0.0316227766016838;
    double pu_w = 0.1;
    double pt_w = 1.0;
    int n_users = 8;
    int n_bs = 4;
    int n_ris = 3;
    double sum_tx_w = 1.7;   // reference total transmit power
    double sum_ak = 1e3;     // reference sum of per-user SNR slopes
};

struct Prop3Result {
    double g_value = 0.0;     // derivative molecule
    bool condition = false;   // static power large enough for rise-then-fall
};

double prop3_eta(double l, const Prop3Params& prm);
double prop3_derivative(double l, const Prop3Params& prm);
Prop3Result prop3_g(double l, const Prop3Params& prm);

// Reference scalars extracted from one converged optimizer run.
struct AnalysisReference {
    std::vector<double> per_user_tx_w;
    double sum_tx_w = 0.0;
    double sum_ak = 0.0;
};
AnalysisReference analysis_reference(const SystemConfig& cfg,
                                     std::uint64_t seed);

// --- empirical sweeps -------------------------------------------------------
enum class SweepVariable { TransmitPower, RisCount, RisSize, PhaseBits };

const char* sweep_variable_name(SweepVariable v);

struct PropositionReport {
    std::string proposition_id;
    std::string sweep_variable;
    std::vector<double> sweep_points;
    std::vector<double> eta_values;         // mean over seeds, bits/J
    std::vector<double> sum_rate_values;    // mean over seeds, bits/s/Hz
    std::vector<double> derivative_values;  // analytic curve, where defined
    bool condition_holds = false;
    bool verdict = false;

    struct Cell {
        double value = 0.0;
        std::uint64_t seed = 0;
        double eta = 0.0;
        double sum_rate = 0.0;
        int iterations = 0;
        double wall_time_s = 0.0;
        bool ok = true;
        std::string error;
    };
    std::vector<Cell> cells;
};

// Full optimizer run per grid point per seed with common random numbers.
// RIS-count sweeps hold N0 = n_bs + n_ris fixed and trade BSs for RISs.
PropositionReport empirical_sweep(SweepVariable var,
                                  const std::vector<double>& grid,
                                  const SystemConfig& base,
                                  const std::vector<std::uint64_t>& seeds);

std::string proposition_report_csv(const PropositionReport& rep);
std::string proposition_report_summary_json(const PropositionReport& rep);

}  // namespace rcf
