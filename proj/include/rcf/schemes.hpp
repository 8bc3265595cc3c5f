#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcf/channel.hpp"

namespace rcf {

enum class SchemeKind { ProposedRis, Das, NoRis, ConventionalCellfree };

const char* scheme_name(SchemeKind kind);
std::optional<SchemeKind> scheme_from_name(const std::string& name);

// A benchmark scheme and the config it runs with. The DAS scheme keeps the
// base RIS geometry around (its distributed antennas sit at the exact RIS
// element positions) but its derived config carries no RISs.
struct Scheme {
    SchemeKind kind = SchemeKind::ProposedRis;
    SystemConfig derived;
    int das_extra_antennas = 0;  // M*L of the base config (DAS only)

    static Scheme make(SchemeKind kind, const SystemConfig& base);
};

struct RunRecord {
    SchemeKind scheme = SchemeKind::ProposedRis;
    std::uint64_t seed = 0;
    std::string config_hash;
    double eta = 0.0;        // bits/J
    double sum_rate = 0.0;   // bits/s/Hz
    int iterations = 0;
    double wall_time_s = 0.0;
    bool ok = true;
    std::string error;
};

// One full run per seed; solver failures are recorded per seed instead of
// aborting the batch. Deterministic per (scheme, base config, seed).
std::vector<RunRecord> run_benchmark(const Scheme& scheme,
                                     const SystemConfig& base,
                                     const std::vector<std::uint64_t>& seeds);

// Header: scheme,seed,eta_bits_per_joule,sum_rate_bps_hz,iterations,wall_time_s
std::string run_records_csv(const std::vector<RunRecord>& records,
                            bool with_header = true);

// Direct channel of the DAS benchmark: K x (N*N_a + M*L), the extra columns
// drawn with the same per-position substreams as the RIS-user links.
CMat das_channel(const Topology& topo, const SystemConfig& base,
                 std::uint64_t seed);

}  // namespace rcf
