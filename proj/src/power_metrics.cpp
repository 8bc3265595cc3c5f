#include "rcf/power_metrics.hpp"

#include <cmath>

#include "rcf/errors.hpp"

namespace rcf {

RateReport user_rates(const CMat& h_eff, const CMat& v_d, double noise_w) {
    const auto& kn = simd::active();
    const int n_users = h_eff.rows();
    const CMat vt = adjoint(v_d);  // K x T, rows are conj of beam columns

    RateReport rr;
    rr.per_user.resize(static_cast<std::size_t>(n_users));
    rr.sinr_per_user.resize(static_cast<std::size_t>(n_users));
    for (int k = 0; k < n_users; ++k) {
        double signal = 0.0;
        double interference = 0.0;
        for (int kp = 0; kp < n_users; ++kp) {
            // H_k * v_kp = sum_t H[k,t] conj(vt[kp,t])
            const cx g = kn.dotc(vt.row(kp), h_eff.row(k),
                                 static_cast<std::size_t>(h_eff.cols()));
            const double p = std::norm(g);
            if (kp == k) {
                signal = p;
            } else {
                interference += p;
            }
        }
        const double sinr = signal / (interference + noise_w);
        rr.sinr_per_user[static_cast<std::size_t>(k)] = sinr;
        rr.per_user[static_cast<std::size_t>(k)] = std::log2(1.0 + sinr);
        rr.sum += rr.per_user[static_cast<std::size_t>(k)];
    }
    return rr;
}

PowerBreakdown total_power(const SystemConfig& cfg, const CMat& v_d) {
    if (v_d.rows() != cfg.total_antennas()) {
        throw BlockMismatch("beamformer rows do not match n_bs * n_antennas");
    }
    const auto& kn = simd::active();
    PowerBreakdown pb;
    pb.transmit_per_bs.resize(static_cast<std::size_t>(cfg.n_bs), 0.0);
    for (int n = 0; n < cfg.n_bs; ++n) {
        double acc = 0.0;
        for (int r = n * cfg.n_ant; r < (n + 1) * cfg.n_ant; ++r) {
            acc += kn.sum_abs2(v_d.row(r), static_cast<std::size_t>(v_d.cols()));
        }
        pb.transmit_per_bs[static_cast<std::size_t>(n)] = acc;
        pb.amplifier_weighted += cfg.amp_loss * acc;
    }
    pb.static_bs = cfg.n_bs * cfg.pb_w;
    pb.static_ris = static_cast<double>(cfg.total_elements()) * cfg.pr_w;
    pb.static_users = cfg.n_users * cfg.pu_w;
    pb.total = pb.amplifier_weighted + pb.static_bs + pb.static_ris +
               pb.static_users;
    return pb;
}

double energy_efficiency(const RateReport& rates, const PowerBreakdown& power,
                         double bandwidth_hz) {
    return bandwidth_hz * rates.sum / power.total;
}

}  // namespace rcf
