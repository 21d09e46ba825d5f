#include "cdg/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "cdg/errors.hpp"

namespace cdg {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& where,
                  std::initializer_list<const char*> allowed)
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
    }
}

/// A knob that was supplied for a case that cannot honor it is a config
/// error, not something to silently drop.
void reject(const json& section, const char* key, const std::string& name)
{
    if (section.contains(key))
        throw ConfigError("config: '" + std::string(key) + "' is not configurable for case '" +
                          name + "'");
}

double number_or(const json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("config: '") + key + "' must be a number");
    return j.at(key).get<double>();
}

int integer_or(const json& j, const char* key, int fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(std::string("config: '") + key + "' must be an integer");
    return j.at(key).get<int>();
}

LimiterKind limiter_from_name(const std::string& s)
{
    if (s == "none")
        return LimiterKind::None;
    if (s == "barth_jespersen")
        return LimiterKind::BarthJespersen;
    if (s == "weno")
        return LimiterKind::Weno;
    throw ConfigError("config: unknown limiter '" + s +
                      "' (use none, barth_jespersen, or weno)");
}

}  // namespace

CaseSpec case_from_config_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: document must be a JSON object");

    require_keys(j, "the top level",
                 {"case", "mesh", "columns", "velocity", "dt_seconds", "n_steps", "limiter",
                  "basis_order", "diagnostics_every", "snapshots_at"});
    if (!j.contains("case") || !j.at("case").is_string())
        throw ConfigError("config: required string key 'case' is missing");
    const std::string name = j.at("case").get<std::string>();

    const json mesh = j.value("mesh", json::object());
    const json columns = j.value("columns", json::object());
    const json velocity = j.value("velocity", json::object());
    require_keys(mesh, "'mesh'", {"level", "nx", "ny", "dx", "radius"});
    require_keys(columns, "'columns'", {"nlayers"});
    require_keys(velocity, "'velocity'", {"kappa", "cfl"});

    const int level = integer_or(mesh, "level", 0);
    const int nx = integer_or(mesh, "nx", 0);
    const int nlayers = integer_or(columns, "nlayers", 0);
    const double dt_seconds = number_or(j, "dt_seconds", 0.0);

    // Dispatch through the case factories so every derived constant (flow
    // scales, step counts, layer geometry) stays consistent with the knobs.
    CaseSpec cs;
    bool dt_consumed = false;
    if (name == "deformational_sphere") {
        for (const char* k : {"nx", "ny", "dx", "radius"})
            reject(mesh, k, name);
        reject(velocity, "cfl", name);
        cs = case_deformational_sphere(level > 0 ? level : 3, dt_seconds,
                                       number_or(velocity, "kappa", 0.0));
        dt_consumed = true;  // the factory snaps dt to divide the period
    } else if (name == "solid_body" || name == "solid_body_rest") {
        for (const char* k : {"nx", "ny", "dx", "radius"})
            reject(mesh, k, name);
        reject(velocity, "kappa", name);
        const double cfl =
            name == "solid_body" ? number_or(velocity, "cfl", 1.5) : 0.0;
        if (name == "solid_body_rest")
            reject(velocity, "cfl", name);
        cs = case_solid_body("sphere", cfl, level > 0 ? level : 3);
    } else if (name == "vertical_a" || name == "vertical_b" || name == "vertical_c") {
        for (const char* k : {"level", "nx", "ny", "dx", "radius"})
            reject(mesh, k, name);
        for (const char* k : {"kappa", "cfl"})
            reject(velocity, k, name);
        cs = case_vertical_column(nlayers, name.back());
    } else if (name == "xz_slice" || name == "xz_freestream") {
        for (const char* k : {"level", "ny", "dx", "radius"})
            reject(mesh, k, name);
        for (const char* k : {"kappa", "cfl"})
            reject(velocity, k, name);
        cs = name == "xz_slice" ? case_xz_slice(nx, nlayers)
                                : case_xz_freestream(nx, nlayers);
    } else {
        cs = make_case(name);  // throws with the list of known names
    }

    if (name != "vertical_a" && name != "vertical_b" && name != "vertical_c" &&
        name != "xz_slice" && name != "xz_freestream")
        reject(columns, "nlayers", name);

    if (dt_seconds > 0.0 && !dt_consumed)
        cs.dt = dt_seconds;
    cs.n_steps = integer_or(j, "n_steps", cs.n_steps);
    if (cs.n_steps < 1)
        throw ConfigError("config: 'n_steps' must be positive");

    if (j.contains("limiter")) {
        if (!j.at("limiter").is_string())
            throw ConfigError("config: 'limiter' must be a string");
        cs.scheme.limiter = limiter_from_name(j.at("limiter").get<std::string>());
    }
    cs.scheme.basis_order = integer_or(j, "basis_order", cs.scheme.basis_order);
    cs.diagnostics_every = integer_or(j, "diagnostics_every", cs.diagnostics_every);
    if (cs.diagnostics_every < 1)
        throw ConfigError("config: 'diagnostics_every' must be positive");

    if (j.contains("snapshots_at")) {
        if (!j.at("snapshots_at").is_array())
            throw ConfigError("config: 'snapshots_at' must be an array of steps");
        cs.snapshots_at.clear();
        for (const auto& v : j.at("snapshots_at")) {
            if (!v.is_number_integer())
                throw ConfigError("config: 'snapshots_at' must contain integers");
            cs.snapshots_at.push_back(v.get<int>());
        }
    }
    return cs;
}

CaseSpec case_from_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return case_from_config_text(ss.str());
}

}  // namespace cdg
