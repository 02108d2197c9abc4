#include "srg/config.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

namespace srg {

using nlohmann::json;

namespace {

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

RunConfig parse(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be an object");
    static const std::set<std::string> known{
        "schema_version", "mode",    "constants", "grids",       "initial",
        "z_center",       "h_z",     "flow",      "seed",        "tolerances",
        "with_oracle",    "outputs", "ledger_ell_max", "ledger"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key())) throw ConfigError("unknown config field '" + it.key() + "'");

    RunConfig cfg;
    std::string mode = j.value("mode", std::string("strict"));
    if (mode == "strict") {
        cfg.constants = ModelConstants::strict_defaults();
    } else if (mode == "lab") {
        cfg.constants = ModelConstants::lab_defaults();
        cfg.n_modes = 14;
        cfg.delta = 1.0;
    } else {
        throw ConfigError("mode must be 'strict' or 'lab'");
    }

    if (j.contains("constants")) {
        const auto& c = j.at("constants");
        read_field(c, "rho", cfg.constants.rho);
        read_field(c, "mu", cfg.constants.mu);
        read_field(c, "xi", cfg.constants.xi);
        read_field(c, "alpha_minus", cfg.constants.alpha_minus);
        read_field(c, "alpha_plus", cfg.constants.alpha_plus);
    }
    if (j.contains("grids")) {
        const auto& g = j.at("grids");
        read_field(g, "n_modes", cfg.n_modes);
        read_field(g, "delta", cfg.delta);
        read_field(g, "n_max", cfg.n_max);
        read_field(g, "m_max", cfg.m_max);
        read_field(g, "l_max", cfg.l_max);
        read_field(g, "p_max", cfg.p_max);
    }
    if (j.contains("initial")) {
        const auto& i = j.at("initial");
        read_field(i, "preset", cfg.preset);
        read_field(i, "g", cfg.g);
        read_field(i, "path", cfg.family_file);
    }
    if (j.contains("z_center")) {
        const auto& z = j.at("z_center");
        if (!z.is_array() || z.size() != 2)
            throw ConfigError("z_center must be an array [re, im]");
        cfg.z_center_re = z[0].get<double>();
        cfg.z_center_im = z[1].get<double>();
    }
    read_field(j, "h_z", cfg.h_z);
    if (j.contains("flow")) {
        const auto& fl = j.at("flow");
        read_field(fl, "s", cfg.flow_s);
        read_field(fl, "alphas", cfg.alphas);
        read_field(fl, "beta", cfg.beta);
    }
    read_field(j, "seed", cfg.seed);
    if (j.contains("tolerances")) {
        const auto& t = j.at("tolerances");
        read_field(t, "fp", cfg.tol_fp);
        read_field(t, "normalization", cfg.tol_norm);
        read_field(t, "semigroup", cfg.tol_semigroup);
    }
    read_field(j, "with_oracle", cfg.with_oracle);
    read_field(j, "ledger_ell_max", cfg.ledger_ell_max);
    if (j.contains("ledger")) {
        const auto& l = j.at("ledger");
        read_field(l, "eps_I", cfg.eps0_I);
        read_field(l, "eps_Z", cfg.eps0_Z);
        read_field(l, "eps_F", cfg.eps0_F);
    }
    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        read_field(o, "trajectory_csv", cfg.out_trajectory);
        read_field(o, "checkpoint", cfg.out_checkpoint);
        read_field(o, "report_json", cfg.out_report);
    }
    validate_config(cfg);
    return cfg;
}

} // namespace

void validate_config(const RunConfig& cfg) {
    auto fail = [](const std::string& field, const std::string& why) {
        throw ConfigError("config field '" + field + "': " + why);
    };
    if (cfg.n_modes < 2) fail("grids.n_modes", "need at least 2 modes");
    if (cfg.delta <= 0.0) fail("grids.delta", "must be positive");
    if (cfg.n_max < 1) fail("grids.n_max", "need at least one photon");
    if (cfg.m_max < 0 || cfg.m_max > 4) fail("grids.m_max", "supported range is 0..4");
    if (cfg.l_max < 2) fail("grids.l_max", "composition needs l_max >= 2");
    if (cfg.p_max < 0) fail("grids.p_max", "must be >= 0");
    if (cfg.h_z <= 0.0) fail("h_z", "must be positive");
    if (cfg.flow_s < 0.0) fail("flow.s", "must be >= 0");
    if (cfg.preset != "free" && cfg.preset != "coupling" && cfg.preset != "file")
        fail("initial.preset", "must be free, coupling, or file");
    if (cfg.preset == "file" && cfg.family_file.empty())
        fail("initial.path", "required for the file preset");
    if (cfg.tol_fp <= 0.0) fail("tolerances.fp", "must be positive");
    if (cfg.tol_norm <= 0.0) fail("tolerances.normalization", "must be positive");
    if (cfg.ledger_ell_max < 0) fail("ledger_ell_max", "must be >= 0");
    if (!cfg.alphas.empty()) {
        for (double a : cfg.alphas)
            if (a < cfg.constants.alpha_minus - 1e-12 || a > cfg.constants.alpha_plus + 1e-12)
                fail("flow.alphas", "entry outside [alpha_minus, alpha_plus]");
    }
    if (cfg.beta >= 0.0 && cfg.beta > cfg.constants.alpha_plus + 1e-12)
        fail("flow.beta", "must lie in [0, alpha_plus]");
    // constants: strict mode throws here, lab mode collects warnings
    cfg.constants.validate();
    double bound = std::exp(-cfg.constants.iota() * cfg.constants.alpha_plus) * cfg.constants.rho
                   / 2.0;
    double zmag = std::hypot(cfg.z_center_re, cfg.z_center_im) + 2.0 * cfg.h_z;
    if (zmag > cfg.constants.rho / 2.0)
        fail("z_center", "stencil leaves D_{rho/2}");
    (void)bound;
}

RunConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse(j);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace srg
