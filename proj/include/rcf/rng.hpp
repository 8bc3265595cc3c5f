#pragma once

#include <cstdint>

#include "rcf/types.hpp"

namespace rcf {

// Counter-style RNG with substreams keyed by (domain, indices). Every entity
// and every scalar link owns its own stream derived from the master seed, so
// enlarging the system (more users, more RIS elements) never perturbs the
// draws of existing entities. splitmix64 plus a hand-rolled Box-Muller keeps
// the output identical across platforms and standard libraries.
class SubstreamRng {
public:
    enum Domain : std::uint64_t {
        TopoBs = 1,
        TopoRis = 2,
        TopoUser = 3,
        FadeDirect = 4,    // (bs, antenna, user)
        FadeBsRis = 5,     // (ris, element, bs, antenna)
        FadeRisUser = 6,   // (ris, element, user)
        InitPhase = 7,     // (element index)
        Generic = 8,
    };

    SubstreamRng(std::uint64_t master, Domain domain, std::uint64_t i0 = 0,
                 std::uint64_t i1 = 0, std::uint64_t i2 = 0,
                 std::uint64_t i3 = 0) {
        state_ = mix(master ^ 0x9e3779b97f4a7c15ULL);
        state_ = mix(state_ ^ (static_cast<std::uint64_t>(domain) * 0xbf58476d1ce4e5b9ULL));
        state_ = mix(state_ ^ (i0 + 0x94d049bb133111ebULL));
        state_ = mix(state_ ^ (i1 + 0xd6e8feb86659fd93ULL));
        state_ = mix(state_ ^ (i2 + 0xa5a5a5a5a5a5a5a5ULL));
        state_ = mix(state_ ^ (i3 + 0x0123456789abcdefULL));
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform in (0, 1]; never returns 0 so log() below is safe.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Circularly symmetric complex normal, unit variance (per complex sample).
    cx next_cnormal() {
        const double s = 0.70710678118654752440;
        const double re = next_normal();
        const double im = next_normal();
        return {s * re, s * im};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace rcf
