// Command-line front end: single runs, parameter sweeps, benchmark batches
// and the oracle validation suites, with CSV/JSON emission.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rcf/analysis.hpp"
#include "rcf/config_io.hpp"
#include "rcf/eem.hpp"
#include "rcf/schemes.hpp"
#include "rcf/validate.hpp"

namespace {

rcf::SystemConfig build_config(const std::string& config_path,
                               const std::vector<std::string>& overrides) {
    rcf::SystemConfig cfg;
    if (!config_path.empty()) {
        cfg = rcf::load_config_file(config_path);
    }
    if (!overrides.empty()) {
        cfg = rcf::apply_overrides(cfg, overrides);
    }
    return cfg;
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    const auto parse_one = [](const std::string& tok) {
        return static_cast<std::uint64_t>(std::stoull(tok));
    };
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        const std::size_t dots = tok.find("..");
        if (dots != std::string::npos) {
            const std::uint64_t lo = parse_one(tok.substr(0, dots));
            const std::uint64_t hi = parse_one(tok.substr(dots + 2));
            if (hi < lo) throw rcf::ConfigError("bad seed range '" + tok + "'");
            for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        } else if (!tok.empty()) {
            seeds.push_back(parse_one(tok));
        }
        pos = comma + 1;
    }
    if (seeds.empty()) throw rcf::ConfigError("empty seed list");
    return seeds;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string tok = spec.substr(pos, comma - pos);
        if (!tok.empty()) grid.push_back(std::stod(tok));
        pos = comma + 1;
    }
    if (grid.empty()) throw rcf::ConfigError("empty grid");
    return grid;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw rcf::ConfigError("cannot write '" + path + "'");
    out << content;
}

int cmd_run(const std::string& config_path,
            const std::vector<std::string>& overrides, std::int64_t seed,
            const std::string& out_path) {
    rcf::SystemConfig cfg = build_config(config_path, overrides);
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

    const rcf::Topology topo = rcf::generate_topology(cfg, cfg.seed);
    const rcf::ChannelSet ch = rcf::generate_channels(topo, cfg, cfg.seed);
    const rcf::EEReport rep =
        rcf::run_eem(cfg, ch, rcf::init_random_phase(cfg, cfg.seed));

    const std::string json = rcf::ee_report_to_json(rep);
    if (!out_path.empty()) {
        write_file(out_path, json);
        std::printf("eta = %.6e bits/J, sum rate = %.4f bits/s/Hz, "
                    "%d iterations (%s); report written to %s\n",
                    rep.final_eta, rep.final_rates.sum, rep.iterations,
                    rep.converged ? "converged" : "iteration cap", out_path.c_str());
    } else {
        std::printf("%s\n", json.c_str());
    }
    return 0;
}

int cmd_sweep(const std::string& config_path,
              const std::vector<std::string>& overrides,
              const std::string& variable, const std::string& grid_spec,
              const std::string& seeds_spec, const std::string& out_path,
              const std::string& summary_path) {
    const rcf::SystemConfig cfg = build_config(config_path, overrides);
    rcf::SweepVariable var;
    if (variable == "pt_dbm") var = rcf::SweepVariable::TransmitPower;
    else if (variable == "m") var = rcf::SweepVariable::RisCount;
    else if (variable == "l") var = rcf::SweepVariable::RisSize;
    else if (variable == "b") var = rcf::SweepVariable::PhaseBits;
    else throw rcf::ConfigError("variable must be pt_dbm, m, l or b");

    const rcf::PropositionReport rep = rcf::empirical_sweep(
        var, parse_grid(grid_spec), cfg, parse_seeds(seeds_spec));

    const std::string csv = rcf::proposition_report_csv(rep);
    if (!out_path.empty()) {
        write_file(out_path, csv);
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    const std::string summary = rcf::proposition_report_summary_json(rep);
    if (!summary_path.empty()) {
        write_file(summary_path, summary);
    }
    std::fprintf(stderr, "%s sweep over %zu points x %s seeds: verdict %s\n",
                 rep.proposition_id.c_str(), rep.sweep_points.size(),
                 seeds_spec.c_str(), rep.verdict ? "ok" : "failed");
    return 0;
}

int cmd_bench(const std::string& config_path,
              const std::vector<std::string>& overrides,
              const std::string& schemes_spec, const std::string& seeds_spec,
              double pt_dbm, bool has_pt, const std::string& out_path) {
    rcf::SystemConfig cfg = build_config(config_path, overrides);
    if (has_pt) cfg.pt_w = rcf::dbm_to_w(pt_dbm);

    std::vector<rcf::SchemeKind> kinds;
    if (schemes_spec == "all") {
        kinds = {rcf::SchemeKind::ProposedRis, rcf::SchemeKind::Das,
                 rcf::SchemeKind::NoRis, rcf::SchemeKind::ConventionalCellfree};
    } else {
        std::size_t pos = 0;
        while (pos < schemes_spec.size()) {
            std::size_t comma = schemes_spec.find(',', pos);
            if (comma == std::string::npos) comma = schemes_spec.size();
            const std::string tok = schemes_spec.substr(pos, comma - pos);
            const auto kind = rcf::scheme_from_name(tok);
            if (!kind.has_value()) {
                throw rcf::ConfigError("unknown scheme '" + tok + "'");
            }
            kinds.push_back(*kind);
            pos = comma + 1;
        }
    }
    if (kinds.empty()) throw rcf::ConfigError("empty scheme list");

    const std::vector<std::uint64_t> seeds = parse_seeds(seeds_spec);
    std::string csv;
    bool first = true;
    for (const rcf::SchemeKind kind : kinds) {
        const rcf::Scheme scheme = rcf::Scheme::make(kind, cfg);
        const auto records = rcf::run_benchmark(scheme, cfg, seeds);
        csv += rcf::run_records_csv(records, first);
        first = false;
        double mean = 0.0;
        int ok = 0;
        for (const auto& r : records) {
            if (r.ok) {
                mean += r.eta;
                ++ok;
            }
        }
        std::fprintf(stderr, "%-22s mean eta %.6e bits/J over %d/%zu seeds\n",
                     rcf::scheme_name(kind), ok ? mean / ok : 0.0, ok,
                     seeds.size());
    }
    if (!out_path.empty()) {
        write_file(out_path, csv);
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    return 0;
}

int cmd_validate(bool fast) {
    const auto suites = rcf::run_validation(fast);
    bool all_ok = true;
    for (const auto& s : suites) {
        std::printf("%-24s %d/%d %s\n", s.name.c_str(), s.passed, s.total,
                    s.ok ? "ok" : "FAILED");
        all_ok = all_ok && s.ok;
    }
    return all_ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-aided cell-free MIMO energy-efficiency simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, summary_path;
    std::vector<std::string> overrides;
    std::int64_t seed = -1;

    auto* run = app.add_subcommand("run", "single optimizer run, JSON report");
    run->add_option("--config", config_path, "config JSON file");
    run->add_option("--set", overrides, "override key=value (repeatable)");
    run->add_option("--seed", seed, "RNG seed (overrides config)");
    run->add_option("--out", out_path, "report output path");

    std::string variable = "pt_dbm", grid_spec, seeds_spec = "0";
    auto* sweep = app.add_subcommand("sweep", "parameter sweep, CSV + summary");
    sweep->add_option("--config", config_path, "config JSON file");
    sweep->add_option("--set", overrides, "override key=value (repeatable)");
    sweep->add_option("--variable", variable, "pt_dbm | m | l | b")->required();
    sweep->add_option("--grid", grid_spec, "comma-separated values")->required();
    sweep->add_option("--seeds", seeds_spec, "e.g. 0..9 or 1,2,5");
    sweep->add_option("--out", out_path, "CSV output path");
    sweep->add_option("--summary", summary_path, "JSON summary path");

    std::string schemes_spec = "all";
    double pt_dbm = 30.0;
    auto* bench = app.add_subcommand("bench", "benchmark schemes, CSV");
    bench->add_option("--config", config_path, "config JSON file");
    bench->add_option("--set", overrides, "override key=value (repeatable)");
    bench->add_option("--schemes", schemes_spec, "all or comma list");
    bench->add_option("--seeds", seeds_spec, "e.g. 0..49");
    auto* pt_opt = bench->add_option("--ptdbm", pt_dbm, "per-BS budget, dBm");
    bench->add_option("--out", out_path, "CSV output path");

    bool fast = false;
    auto* validate = app.add_subcommand("validate", "oracle suites");
    validate->add_flag("--fast", fast, "reduced instance counts");

    try {
        app.parse(argc, argv);
        if (run->parsed()) return cmd_run(config_path, overrides, seed, out_path);
        if (sweep->parsed()) {
            return cmd_sweep(config_path, overrides, variable, grid_spec,
                             seeds_spec, out_path, summary_path);
        }
        if (bench->parsed()) {
            return cmd_bench(config_path, overrides, schemes_spec, seeds_spec,
                             pt_dbm, pt_opt->count() > 0, out_path);
        }
        if (validate->parsed()) return cmd_validate(fast);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const rcf::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const rcf::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
