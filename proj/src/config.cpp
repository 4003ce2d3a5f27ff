#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lcodr/errors.hpp"
#include "lcodr/model.hpp"

namespace lcodr {

using nlohmann::json;

namespace {

template <typename Enum>
struct EnumName {
    Enum value;
    std::string_view name;
};

constexpr EnumName<Assumptions::CycleAdjustment> kCycleNames[]{
    {Assumptions::CycleAdjustment::TextDirection, "text_direction"},
    {Assumptions::CycleAdjustment::AsPrinted, "as_printed"},
};
constexpr EnumName<Assumptions::V2GRebound> kReboundNames[]{
    {Assumptions::V2GRebound::RoundTripLoss, "round_trip_loss"},
    {Assumptions::V2GRebound::Unity, "unity"},
};
constexpr EnumName<Assumptions::StorageFleetBasis> kFleetNames[]{
    {Assumptions::StorageFleetBasis::ActivePower, "active_power"},
    {Assumptions::StorageFleetBasis::AveragePower, "average_power"},
};

template <typename Enum, std::size_t N>
Enum enum_from(const EnumName<Enum> (&names)[N], const json& v, const std::string& path) {
    if (!v.is_string()) throw ValidationError(path, "must be a string");
    const auto s = v.get<std::string>();
    for (const auto& n : names) {
        if (n.name == s) return n.value;
    }
    std::string allowed;
    for (const auto& n : names) {
        if (!allowed.empty()) allowed += ", ";
        allowed += n.name;
    }
    throw ValidationError(path, "unknown value '" + s + "' (allowed: " + allowed + ")");
}

template <typename Enum, std::size_t N>
std::string_view enum_name(const EnumName<Enum> (&names)[N], Enum value) {
    for (const auto& n : names) {
        if (n.value == value) return n.name;
    }
    return "?";
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "must be a number");
    return v.get<double>();
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) throw ValidationError(path, "must be an object");
}

ApplicationSpec parse_application(const json& j, const std::string& path) {
    require_object(j, path);
    ApplicationSpec app;
    bool has_kw = false;
    bool has_mw = false;
    bool has_suitability = false;
    for (const auto& [key, value] : j.items()) {
        const std::string kp = path + "." + key;
        if (key == "name") {
            if (!value.is_string()) throw ValidationError(kp, "must be a string");
            app.name = value.get<std::string>();
        } else if (key == "power_capacity_kw") {
            app.power_capacity_kw = as_number(value, kp);
            has_kw = true;
        } else if (key == "power_capacity_mw") {
            app.power_capacity_kw = as_number(value, kp) * 1000.0;
            has_mw = true;
        } else if (key == "discharge_duration_h") {
            app.discharge_duration_h = as_number(value, kp);
        } else if (key == "annual_cycles") {
            app.annual_cycles = as_number(value, kp);
        } else if (key == "suitable_schemes") {
            if (!value.is_array()) throw ValidationError(kp, "must be an array");
            for (const auto& s : value) {
                if (!s.is_string()) throw ValidationError(kp, "entries must be strings");
                auto scheme = parse_scheme(s.get<std::string>());
                if (!scheme) throw ValidationError(kp, "unknown scheme '" + s.get<std::string>() + "'");
                app.suitable_schemes.insert(*scheme);
            }
            has_suitability = true;
        } else {
            throw ValidationError(kp, "unknown key");
        }
    }
    if (has_kw == has_mw) {
        throw ValidationError(path, "exactly one of power_capacity_kw / power_capacity_mw is required");
    }
    if (!has_suitability) throw ValidationError(path + ".suitable_schemes", "is required");
    validate(app, path);
    return app;
}

}  // namespace

Config parse_config(std::string_view text, const std::string& origin) {
    json root;
    const bool blank = text.find_first_not_of(" \t\r\n") == std::string_view::npos;
    if (blank) {
        root = json::object();
    } else {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(origin + ": " + e.what());
        }
    }
    if (!root.is_object()) throw ParseError(origin + ": top level must be an object");

    Config cfg{default_parameters(), default_applications()};
    ParameterSet& p = cfg.params;

    if (auto it = root.find("schema_version"); it != root.end()) {
        if (!it->is_number_integer() || it->get<int>() != kConfigSchemaVersion) {
            throw SchemaVersionError(origin + ": unsupported schema_version " + it->dump() +
                                     " (expected " + std::to_string(kConfigSchemaVersion) + ")");
        }
    }

    // section -> key -> field
    std::map<std::string, std::map<std::string, const NumericField*>> by_section;
    for (const auto& f : numeric_fields()) by_section[std::string(f.section)][std::string(f.key)] = &f;

    for (const auto& [section, body] : root.items()) {
        if (section == "schema_version") continue;

        if (section == "applications") {
            if (!body.is_array()) throw ValidationError("applications", "must be an array");
            cfg.applications.clear();
            for (std::size_t i = 0; i < body.size(); ++i) {
                cfg.applications.push_back(
                    parse_application(body[i], "applications[" + std::to_string(i) + "]"));
            }
            continue;
        }
        if (section == "value_factors") {
            require_object(body, section);
            for (const auto& [key, value] : body.items()) {
                const std::string kp = "value_factors." + key;
                const double v = as_number(value, kp);
                if (key == "smart_charging") p.value_factors.smart_charging = v;
                else if (key == "heat_pump") p.value_factors.heat_pump = v;
                else if (key == "v2g_power") p.value_factors.v2g_power = v;
                else if (key == "v2g_energy") p.value_factors.v2g_energy = v;
                else throw ValidationError(kp, "unknown key");
            }
            continue;
        }
        if (section == "assumptions") {
            require_object(body, section);
            for (const auto& [key, value] : body.items()) {
                const std::string kp = "assumptions." + key;
                if (key == "cycle_adjustment") p.assumptions.cycle_adjustment = enum_from(kCycleNames, value, kp);
                else if (key == "v2g_rebound") p.assumptions.v2g_rebound = enum_from(kReboundNames, value, kp);
                else if (key == "storage_fleet_basis") p.assumptions.storage_fleet_basis = enum_from(kFleetNames, value, kp);
                else throw ValidationError(kp, "unknown key");
            }
            continue;
        }

        auto sec = by_section.find(section);
        if (sec == by_section.end()) throw ValidationError(section, "unknown section");
        require_object(body, section);
        for (const auto& [key, value] : body.items()) {
            const std::string kp = section + "." + key;
            if (section == "economics" && key == "lifetime_years") {
                if (!value.is_number_integer()) throw ValidationError(kp, "must be an integer");
                p.econ.lifetime_years = value.get<int>();
                continue;
            }
            auto f = sec->second.find(key);
            if (f == sec->second.end()) throw ValidationError(kp, "unknown key");
            f->second->ref(p) = as_number(value, kp);
        }
    }

    validate(p);
    for (std::size_t i = 0; i < cfg.applications.size(); ++i) {
        validate(cfg.applications[i], "applications[" + std::to_string(i) + "]");
        for (std::size_t k = 0; k < i; ++k) {
            if (cfg.applications[k].name == cfg.applications[i].name) {
                throw ValidationError("applications[" + std::to_string(i) + "].name",
                                      "duplicate application '" + cfg.applications[i].name + "'");
            }
        }
    }
    return cfg;
}

void apply_assumption(Assumptions& a, std::string_view key, std::string_view value) {
    const std::string path = "assumptions." + std::string(key);
    const json v = std::string(value);
    if (key == "cycle_adjustment") a.cycle_adjustment = enum_from(kCycleNames, v, path);
    else if (key == "v2g_rebound") a.v2g_rebound = enum_from(kReboundNames, v, path);
    else if (key == "storage_fleet_basis") a.storage_fleet_basis = enum_from(kFleetNames, v, path);
    else throw ValidationError(path, "unknown key");
}

std::vector<std::pair<std::string, std::string>> describe(const Assumptions& a) {
    return {
        {"cycle_adjustment", std::string(enum_name(kCycleNames, a.cycle_adjustment))},
        {"v2g_rebound", std::string(enum_name(kReboundNames, a.v2g_rebound))},
        {"storage_fleet_basis", std::string(enum_name(kFleetNames, a.storage_fleet_basis))},
    };
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open config file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string());
}

std::string serialize_config(const Config& config) {
    const ParameterSet& p = config.params;
    json root = json::object();
    root["schema_version"] = kConfigSchemaVersion;
    for (const auto& f : numeric_fields()) {
        root[std::string(f.section)][std::string(f.key)] = f.get(p);
    }
    root["economics"]["lifetime_years"] = p.econ.lifetime_years;

    json vf = json::object();
    if (p.value_factors.smart_charging) vf["smart_charging"] = *p.value_factors.smart_charging;
    if (p.value_factors.heat_pump) vf["heat_pump"] = *p.value_factors.heat_pump;
    if (p.value_factors.v2g_power) vf["v2g_power"] = *p.value_factors.v2g_power;
    if (p.value_factors.v2g_energy) vf["v2g_energy"] = *p.value_factors.v2g_energy;
    root["value_factors"] = vf;

    root["assumptions"] = {
        {"cycle_adjustment", enum_name(kCycleNames, p.assumptions.cycle_adjustment)},
        {"v2g_rebound", enum_name(kReboundNames, p.assumptions.v2g_rebound)},
        {"storage_fleet_basis", enum_name(kFleetNames, p.assumptions.storage_fleet_basis)},
    };

    json apps = json::array();
    for (const auto& a : config.applications) {
        json schemes = json::array();
        for (auto s : a.suitable_schemes.to_vector()) schemes.push_back(std::string(to_string(s)));
        apps.push_back({
            {"name", a.name},
            {"power_capacity_kw", a.power_capacity_kw},
            {"discharge_duration_h", a.discharge_duration_h},
            {"annual_cycles", a.annual_cycles},
            {"suitable_schemes", schemes},
        });
    }
    root["applications"] = apps;
    return root.dump(2) + "\n";
}

}  // namespace lcodr
