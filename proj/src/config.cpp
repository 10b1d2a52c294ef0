#include "mrsim/config.hpp"

#include <cmath>
#include <set>

#include "mrsim/io.hpp"

namespace mrsim {

namespace {

using nlohmann::json;

[[noreturn]] void missing(const std::string& path) {
    throw ConfigError("config: missing field " + path);
}

const json& require(const json& j, const std::string& parent, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) missing(parent.empty() ? key : parent + "." + key);
    return j.at(key);
}

double require_number(const json& j, const std::string& parent, const std::string& key) {
    const json& v = require(j, parent, key);
    if (!v.is_number()) throw ConfigError("config: field " + parent + "." + key + " must be a number");
    return v.get<double>();
}

double opt_number(const json& j, const std::string& parent, const std::string& key, double fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config: field " + parent + "." + key + " must be a number");
    return v.get<double>();
}

int opt_int(const json& j, const std::string& parent, const std::string& key, int fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("config: field " + parent + "." + key + " must be an integer");
    return v.get<int>();
}

std::string opt_string(const json& j, const std::string& parent, const std::string& key,
                       const std::string& fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError("config: field " + parent + "." + key + " must be a string");
    return v.get<std::string>();
}

void check_positive(double v, const std::string& path) {
    if (!(v > 0.0)) throw ConfigError("config: field " + path + " must be positive");
}

InteractionTable parse_interactions(const json& j) {
    const json& node = require(j, "", "interactions");
    InteractionTable t;
    const json& c3 = require(node, "interactions", "c3_ghz_um3");
    for (const char* key : {"u0", "d0", "00"})
        t.c3_ghz_um3[key] = require_number(c3, "interactions.c3_ghz_um3", key);
    const json& c6 = require(node, "interactions", "c6_ghz_um6");
    for (const char* key : {"u0", "d0", "uu", "dd", "00"})
        t.c6_ghz_um6[key] = require_number(c6, "interactions.c6_ghz_um6", key);
    if (node.contains("forster")) {
        const json& f = node.at("forster");
        t.forster_c6_ghz2_um6 = require_number(f, "interactions.forster", "c6_ghz2_um6");
        t.forster_detuning_mhz = require_number(f, "interactions.forster", "detuning_mhz");
    }
    t.species_tag = opt_string(node, "interactions", "species_tag", "");
    t.validate();
    return t;
}

}  // namespace

Geometry RunConfig::geometry_for(int n) const {
    Geometry g;
    g.n_sites = n;
    g.spacing_um = spacing_um;
    g.theta_deg = theta_deg;
    g.validate();
    return g;
}

double RunConfig::phase_scale() const {
    return angular_convention == "cycles" ? 2.0 * M_PI : 1.0;
}

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    RunConfig c;
    c.experiment = opt_string(j, "", "experiment", "run");
    c.table = parse_interactions(j);

    const json& geo = require(j, "", "geometry");
    c.spacing_um = require_number(geo, "geometry", "spacing_um");
    c.theta_deg = require_number(geo, "geometry", "theta_deg");
    check_positive(c.spacing_um, "geometry.spacing_um");

    const json& nl = require(j, "", "n_list");
    if (!nl.is_array() || nl.empty()) throw ConfigError("config: field n_list must be a non-empty array");
    for (const auto& v : nl) {
        if (!v.is_number_integer() || v.get<int>() < 1)
            throw ConfigError("config: field n_list entries must be integers >= 1");
        c.n_list.push_back(v.get<int>());
    }

    const json proto = j.contains("protocol") ? j.at("protocol") : json::object();
    c.protocol.duration_us = opt_number(proto, "protocol", "duration_us", c.protocol.duration_us);
    c.protocol.delta_max_mhz = opt_number(proto, "protocol", "delta_max_mhz", c.protocol.delta_max_mhz);
    c.protocol.rabi_mhz = opt_number(proto, "protocol", "rabi_mhz", c.protocol.rabi_mhz);
    c.protocol.compensation = opt_string(proto, "protocol", "compensation", c.protocol.compensation);
    c.protocol.initial_state = opt_string(proto, "protocol", "initial_state", c.protocol.initial_state);
    c.protocol.n_output = opt_int(proto, "protocol", "n_output", c.protocol.n_output);
    c.protocol.dt_max_us = opt_number(proto, "protocol", "dt_max_us", c.protocol.dt_max_us);
    check_positive(c.protocol.duration_us, "protocol.duration_us");
    check_positive(c.protocol.dt_max_us, "protocol.dt_max_us");
    if (c.protocol.n_output < 1) throw ConfigError("config: field protocol.n_output must be >= 1");
    if (c.protocol.rabi_mhz < 0.0) throw ConfigError("config: field protocol.rabi_mhz must be >= 0");
    if (c.protocol.compensation != "vdw-flatten" && c.protocol.compensation != "none")
        throw ConfigError("config: field protocol.compensation must be \"vdw-flatten\" or \"none\"");
    if (c.protocol.initial_state != "auto" && c.protocol.initial_state != "grape" &&
        c.protocol.initial_state != "ground-state")
        throw ConfigError(
            "config: field protocol.initial_state must be \"auto\", \"grape\" or \"ground-state\"");

    const json gr = j.contains("grape") ? j.at("grape") : json::object();
    c.grape.duration_us = opt_number(gr, "grape", "duration_us", c.grape.duration_us);
    c.grape.n_slices = opt_int(gr, "grape", "n_slices", c.grape.n_slices);
    c.grape.max_iter = opt_int(gr, "grape", "max_iter", c.grape.max_iter);
    c.grape.target_fidelity = opt_number(gr, "grape", "target_fidelity", c.grape.target_fidelity);
    check_positive(c.grape.duration_us, "grape.duration_us");
    if (c.grape.n_slices < 1) throw ConfigError("config: field grape.n_slices must be >= 1");
    if (c.grape.max_iter < 0) throw ConfigError("config: field grape.max_iter must be >= 0");
    if (!(c.grape.target_fidelity > 0.0 && c.grape.target_fidelity <= 1.0))
        throw ConfigError("config: field grape.target_fidelity must lie in (0, 1]");
    for (const char* key : {"rabi_bounds_mhz", "detuning_bounds_mhz"}) {
        if (!gr.is_object() || !gr.contains(key)) continue;
        const json& b = gr.at(key);
        if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
            throw ConfigError(std::string("config: field grape.") + key + " must be [min, max]");
        std::array<double, 2> arr{b[0].get<double>(), b[1].get<double>()};
        if (arr[0] > arr[1]) throw ConfigError(std::string("config: field grape.") + key + " has min > max");
        if (std::string(key) == "rabi_bounds_mhz")
            c.grape.rabi_bounds_mhz = arr;
        else
            c.grape.detuning_bounds_mhz = arr;
    }

    const json so = j.contains("solver") ? j.at("solver") : json::object();
    c.solver.dense_cap_dim = opt_int(so, "solver", "dense_cap_dim", static_cast<int>(c.solver.dense_cap_dim));
    c.solver.tol = opt_number(so, "solver", "tol", c.solver.tol);
    c.solver.max_restarts = opt_int(so, "solver", "max_restarts", c.solver.max_restarts);
    if (c.solver.dense_cap_dim < 3) throw ConfigError("config: field solver.dense_cap_dim must be >= 3");
    check_positive(c.solver.tol, "solver.tol");
    if (c.solver.max_restarts < 1) throw ConfigError("config: field solver.max_restarts must be >= 1");

    c.lifetime_us = opt_number(j, "", "lifetime_us", c.lifetime_us);
    check_positive(c.lifetime_us, "lifetime_us");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned()) throw ConfigError("config: field seed must be a non-negative integer");
        c.seed = s.get<unsigned>();
    }

    const json un = j.contains("units") ? j.at("units") : json::object();
    c.angular_convention = opt_string(un, "units", "angular_convention", c.angular_convention);
    if (c.angular_convention != "rad" && c.angular_convention != "cycles")
        throw ConfigError("config: field units.angular_convention must be \"rad\" or \"cycles\"");

    c.output_dir = opt_string(j, "", "output_dir", c.output_dir);
    if (j.contains("cutoff_bonds")) {
        const json& cb = j.at("cutoff_bonds");
        if (!cb.is_number_integer() || cb.get<int>() < 1)
            throw ConfigError("config: field cutoff_bonds must be an integer >= 1");
        c.cutoff_bonds = cb.get<int>();
    }
    return c;
}

RunConfig load_config_file(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + path + " is not valid JSON: " + e.what());
    } catch (const ResourceError&) {
        // an unreadable path is the user's input, not an environment limit
        throw ConfigError("config: cannot read " + path);
    }
    return parse_config(j);
}

nlohmann::json resolved_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    nlohmann::json inter;
    inter["c3_ghz_um3"] = cfg.table.c3_ghz_um3;
    inter["c6_ghz_um6"] = cfg.table.c6_ghz_um6;
    if (cfg.table.forster_c6_ghz2_um6) {
        inter["forster"]["c6_ghz2_um6"] = *cfg.table.forster_c6_ghz2_um6;
        inter["forster"]["detuning_mhz"] = *cfg.table.forster_detuning_mhz;
    }
    if (!cfg.table.species_tag.empty()) inter["species_tag"] = cfg.table.species_tag;
    j["interactions"] = inter;
    j["geometry"] = {{"spacing_um", cfg.spacing_um}, {"theta_deg", cfg.theta_deg}};
    j["n_list"] = cfg.n_list;
    j["protocol"] = {{"duration_us", cfg.protocol.duration_us},
                     {"delta_max_mhz", cfg.protocol.delta_max_mhz},
                     {"rabi_mhz", cfg.protocol.rabi_mhz},
                     {"compensation", cfg.protocol.compensation},
                     {"initial_state", cfg.protocol.initial_state},
                     {"n_output", cfg.protocol.n_output},
                     {"dt_max_us", cfg.protocol.dt_max_us}};
    j["grape"] = {{"duration_us", cfg.grape.duration_us},
                  {"n_slices", cfg.grape.n_slices},
                  {"max_iter", cfg.grape.max_iter},
                  {"target_fidelity", cfg.grape.target_fidelity},
                  {"rabi_bounds_mhz", cfg.grape.rabi_bounds_mhz},
                  {"detuning_bounds_mhz", cfg.grape.detuning_bounds_mhz}};
    j["solver"] = {{"dense_cap_dim", cfg.solver.dense_cap_dim},
                   {"tol", cfg.solver.tol},
                   {"max_restarts", cfg.solver.max_restarts}};
    j["lifetime_us"] = cfg.lifetime_us;
    j["seed"] = cfg.seed;
    j["units"] = {{"angular_convention", cfg.angular_convention}};
    j["output_dir"] = cfg.output_dir;
    if (cfg.cutoff_bonds) j["cutoff_bonds"] = *cfg.cutoff_bonds;
    return j;
}

}  // namespace mrsim
