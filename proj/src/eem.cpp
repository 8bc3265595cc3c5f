#include "rcf/eem.hpp"

#include <cmath>
#include <limits>

#include "rcf/rng.hpp"

#include "json.hpp"

namespace rcf {

namespace {

double rate_of(std::span<const double> p, double noise_w) {
    double acc = 0.0;
    for (double v : p) acc += std::log2(1.0 + v / noise_w);
    return acc;
}

bool all_zero(std::span<const double> p) {
    for (double v : p) {
        if (v != 0.0) return false;
    }
    return true;
}

// Final report assembly: re-derive the ZF beamformer for the final phase
// state with the final allocation and measure rates / powers directly.
void finalize(const SystemConfig& cfg, const ChannelSet& ch, EEReport& rep,
              const BeamformerState& last_digital) {
    const CMat h = effective_channel(ch, rep.phase_state.phasors());
    if (all_zero(last_digital.power_alloc)) {
        rep.beam_state = last_digital;
        rep.beam_state.v_d = CMat(h.cols(), h.rows());
        rep.beam_state.zf_directions = zf_directions(h);
    } else {
        rep.beam_state = zf_beamformer(h, last_digital.power_alloc);
        rep.beam_state.y = last_digital.y;
        rep.beam_state.ratio = last_digital.ratio;
        rep.beam_state.iterations = last_digital.iterations;
    }
    rep.final_rates = user_rates(h, rep.beam_state.v_d, cfg.noise_w);
    rep.final_power = total_power(cfg, rep.beam_state.v_d);
    rep.final_eta =
        energy_efficiency(rep.final_rates, rep.final_power, cfg.bandwidth_hz);
}

}  // namespace

EEReport run_eem(const SystemConfig& cfg, const ChannelSet& ch,
                 const PhaseConfig& init_phase, const EEMOptions& opts) {
    EEReport rep;
    rep.phase_state = init_phase;

    // No reflecting elements: the problem is a single digital solve.
    if (cfg.total_elements() == 0) {
        DigitalOptions dopts;
        if (opts.init_beam.has_value()) {
            dopts.warm_p = opts.init_beam->power_alloc;
        }
        const BeamformerState st =
            dinkelbach_power_allocation(ch.h_d, cfg, dopts);
        rep.eta_trace.push_back(cfg.bandwidth_hz * st.ratio);
        rep.iterations = 1;
        rep.converged = true;
        finalize(cfg, ch, rep, st);
        return rep;
    }

    SweepOptions sweep_opts;
    sweep_opts.mode = cfg.continuous_phases() ? AnalogUpdate::Continuous
                                              : cfg.analog_update;
    sweep_opts.rho = cfg.rho;
    sweep_opts.guard = SweepOptions::BudgetGuard{cfg.n_bs, cfg.n_ant, cfg.pt_w};

    std::vector<double> warm_p;
    bool have_warm = false;
    if (opts.init_beam.has_value()) {
        warm_p = opts.init_beam->power_alloc;
        have_warm = true;
    }

    BeamformerState last_digital;
    const double static_w = cfg.static_power_w();
    for (int it = 1; it <= cfg.max_outer; ++it) {
        rep.iterations = it;

        const CMat h = effective_channel(ch, rep.phase_state.phasors());
        DigitalOptions dopts;
        if (have_warm) dopts.warm_p = warm_p;
        BeamformerState st = dinkelbach_power_allocation(h, cfg, dopts);
        const double digital_gain = have_warm ? st.ratio - st.initial_ratio
                                              : std::numeric_limits<double>::infinity();

        double f_end = 0.0;
        long sweep_updates = 0;
        if (all_zero(st.power_alloc)) {
            f_end = 0.0;
        } else {
            const SweepResult sw = analog_sweep(ch, st.power_alloc,
                                                rep.phase_state, sweep_opts);
            rep.phase_state = sw.q;
            f_end = sw.f_final;
            sweep_updates = sw.updates;
        }

        const double rate = rate_of(st.power_alloc, cfg.noise_w);
        const double ratio_end =
            rate / (cfg.amp_loss * f_end + static_w);
        rep.eta_trace.push_back(cfg.bandwidth_hz * ratio_end);

        warm_p = st.power_alloc;
        have_warm = true;
        last_digital = std::move(st);

        const std::size_t n = rep.eta_trace.size();
        if (n >= 2 && std::abs(rep.eta_trace[n - 1] - rep.eta_trace[n - 2]) <=
                          cfg.epsilon * cfg.bandwidth_hz) {
            rep.converged = true;
            break;
        }
        // Fixed-point shortcut: a warm-started solve that cannot improve and a
        // sweep that changes nothing mean the state was already converged.
        if (sweep_updates == 0 && digital_gain <= cfg.epsilon) {
            rep.converged = true;
            break;
        }
    }
    finalize(cfg, ch, rep, last_digital);
    return rep;
}

PhaseConfig init_random_phase(const SystemConfig& cfg, std::uint64_t seed) {
    const int n = cfg.total_elements();
    if (cfg.continuous_phases()) {
        std::vector<double> theta(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            SubstreamRng rng(seed, SubstreamRng::InitPhase,
                             static_cast<std::uint64_t>(j));
            theta[static_cast<std::size_t>(j)] =
                6.283185307179586476925286766559 * rng.next_uniform();
        }
        return PhaseConfig::from_angles(std::move(theta));
    }
    std::vector<int> idx(static_cast<std::size_t>(n));
    const std::uint64_t mask = (1ULL << cfg.phase_bits) - 1ULL;
    for (int j = 0; j < n; ++j) {
        SubstreamRng rng(seed, SubstreamRng::InitPhase,
                         static_cast<std::uint64_t>(j));
        idx[static_cast<std::size_t>(j)] =
            static_cast<int>(rng.next_u64() & mask);
    }
    return PhaseConfig::from_indices(cfg.phase_bits, std::move(idx));
}

std::string ee_report_to_json(const EEReport& rep) {
    nlohmann::json j;
    j["eta_trace_bits_per_joule"] = rep.eta_trace;
    j["final_eta_bits_per_joule"] = rep.final_eta;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["rates"] = {{"per_user_bps_hz", rep.final_rates.per_user},
                  {"sum_bps_hz", rep.final_rates.sum},
                  {"sinr_linear", rep.final_rates.sinr_per_user}};
    j["power"] = {{"transmit_per_bs_w", rep.final_power.transmit_per_bs},
                  {"amplifier_weighted_w", rep.final_power.amplifier_weighted},
                  {"static_bs_w", rep.final_power.static_bs},
                  {"static_ris_w", rep.final_power.static_ris},
                  {"static_users_w", rep.final_power.static_users},
                  {"total_w", rep.final_power.total}};
    j["power_alloc_w"] = rep.beam_state.power_alloc;
    j["phase"] = {{"bits", rep.phase_state.bits},
                  {"indices", rep.phase_state.idx},
                  {"theta_rad", rep.phase_state.theta}};
    return j.dump(2);
}

}  // namespace rcf
