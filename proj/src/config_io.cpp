#include "rcf/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rcf {

namespace {

using nlohmann::json;

const char* analog_update_name(AnalogUpdate m) {
    switch (m) {
        case AnalogUpdate::Enumerate: return "enumerate";
        case AnalogUpdate::ClosedFormQuantized: return "closed_form_quantized";
        case AnalogUpdate::Continuous: return "continuous";
    }
    return "?";
}

AnalogUpdate analog_update_from(const std::string& s) {
    if (s == "enumerate") return AnalogUpdate::Enumerate;
    if (s == "closed_form_quantized") return AnalogUpdate::ClosedFormQuantized;
    if (s == "continuous") return AnalogUpdate::Continuous;
    throw ConfigError("analog_update must be enumerate, closed_form_quantized "
                      "or continuous, got '" + s + "'");
}

json canonical_json(const SystemConfig& cfg) {
    json j;
    j["n_bs"] = cfg.n_bs;
    j["n_antennas"] = cfg.n_ant;
    j["n_users"] = cfg.n_users;
    j["n_ris"] = cfg.n_ris;
    j["ris_elements"] = cfg.ris_elements;
    j["phase_bits"] = cfg.phase_bits;
    j["bandwidth_hz"] = cfg.bandwidth_hz;
    j["noise_dbm"] = w_to_dbm(cfg.noise_w);
    j["rician_kappa"] = cfg.rician_kappa;
    j["carrier_hz"] = cfg.carrier_hz;
    j["bs_radius_m"] = cfg.bs_radius_m;
    j["user_radius_m"] = cfg.user_radius_m;
    j["bs_antenna_spacing_m"] = cfg.bs_antenna_spacing_m;
    j["ris_element_size_m"] = cfg.ris_element_size_m;
    j["pt_dbm"] = w_to_dbm(cfg.pt_w);
    j["amp_loss_factor"] = cfg.amp_loss;
    j["pb_dbw"] = 10.0 * std::log10(cfg.pb_w);
    j["pr_dbm"] = w_to_dbm(cfg.pr_w);
    j["pu_dbm"] = w_to_dbm(cfg.pu_w);
    j["das_antenna_dbm"] = w_to_dbm(cfg.das_antenna_w);
    j["epsilon"] = cfg.epsilon;
    j["rho"] = cfg.rho;
    j["seed"] = cfg.seed;
    j["max_outer"] = cfg.max_outer;
    j["analog_update"] = analog_update_name(cfg.analog_update);
    return j;
}

SystemConfig config_from(const json& j) {
    SystemConfig cfg;
    bool pr_explicit = false;

    for (const auto& [key, value] : j.items()) {
        if (key == "n_bs") cfg.n_bs = value.get<int>();
        else if (key == "n_antennas") cfg.n_ant = value.get<int>();
        else if (key == "n_users") cfg.n_users = value.get<int>();
        else if (key == "n_ris") cfg.n_ris = value.get<int>();
        else if (key == "ris_elements") cfg.ris_elements = value.get<int>();
        else if (key == "phase_bits") {
            if (value.is_string() && value.get<std::string>() == "continuous") {
                cfg.phase_bits = 0;
            } else {
                cfg.phase_bits = value.get<int>();
            }
        }
        else if (key == "bandwidth_hz") cfg.bandwidth_hz = value.get<double>();
        else if (key == "noise_dbm") cfg.noise_w = dbm_to_w(value.get<double>());
        else if (key == "rician_kappa") cfg.rician_kappa = value.get<double>();
        else if (key == "carrier_hz") cfg.carrier_hz = value.get<double>();
        else if (key == "bs_radius_m") cfg.bs_radius_m = value.get<double>();
        else if (key == "user_radius_m") cfg.user_radius_m = value.get<double>();
        else if (key == "bs_antenna_spacing_m") cfg.bs_antenna_spacing_m = value.get<double>();
        else if (key == "ris_element_size_m") cfg.ris_element_size_m = value.get<double>();
        else if (key == "pt_dbm") cfg.pt_w = dbm_to_w(value.get<double>());
        else if (key == "amp_loss_factor") cfg.amp_loss = value.get<double>();
        else if (key == "pb_dbw") cfg.pb_w = dbw_to_w(value.get<double>());
        else if (key == "pr_dbm") { cfg.pr_w = dbm_to_w(value.get<double>()); pr_explicit = true; }
        else if (key == "pu_dbm") cfg.pu_w = dbm_to_w(value.get<double>());
        else if (key == "das_antenna_dbm") cfg.das_antenna_w = dbm_to_w(value.get<double>());
        else if (key == "epsilon") cfg.epsilon = value.get<double>();
        else if (key == "rho") cfg.rho = value.get<double>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "max_outer") cfg.max_outer = value.get<int>();
        else if (key == "analog_update") cfg.analog_update = analog_update_from(value.get<std::string>());
        else throw ConfigError("unknown config key '" + key + "'");
    }
    if (!pr_explicit) {
        cfg.pr_w = SystemConfig::element_power_for_bits(cfg.phase_bits);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

std::string config_to_json(const SystemConfig& cfg) {
    return canonical_json(cfg).dump(2);
}

SystemConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config root must be a JSON object");
    }
    try {
        return config_from(j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config value error: ") + e.what());
    }
}

SystemConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json(buf.str());
}

SystemConfig apply_overrides(const SystemConfig& cfg,
                             const std::vector<std::string>& overrides) {
    json j = canonical_json(cfg);
    // Track whether pr_dbm should be re-derived after a phase_bits change.
    bool bits_changed = false;
    bool pr_set = false;
    for (const std::string& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("override must be key=value, got '" + kv + "'");
        }
        const std::string key = kv.substr(0, eq);
        const std::string raw = kv.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::exception&) {
            value = raw;  // bare strings (e.g. analog_update=enumerate)
        }
        if (!j.contains(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
        j[key] = value;
        if (key == "phase_bits") bits_changed = true;
        if (key == "pr_dbm") pr_set = true;
    }
    if (bits_changed && !pr_set) {
        j.erase("pr_dbm");  // let the per-bits default kick in
    }
    try {
        return config_from(j);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config value error: ") + e.what());
    }
}

std::string config_hash(const SystemConfig& cfg) {
    const std::string canon = canonical_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace rcf
