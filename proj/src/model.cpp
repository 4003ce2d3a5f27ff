#include "lcodr/model.hpp"

#include <cmath>
#include <sstream>

#include "lcodr/errors.hpp"

namespace lcodr {

std::string_view to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::V2G: return "V2G";
        case Scheme::SmartCharging: return "SmartCharging";
        case Scheme::SmartHeatPump: return "SmartHeatPump";
        case Scheme::HeatPumpThermalStorage: return "HeatPumpThermalStorage";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view text) noexcept {
    for (auto s : kAllSchemes) {
        if (to_string(s) == text) return s;
    }
    return std::nullopt;
}

std::string_view to_string(BindingConstraint b) noexcept {
    switch (b) {
        case BindingConstraint::Power: return "power";
        case BindingConstraint::Energy: return "energy";
        case BindingConstraint::NotApplicable: return "n/a";
    }
    return "?";
}

std::vector<Scheme> SchemeSet::to_vector() const {
    std::vector<Scheme> out;
    for (auto s : kAllSchemes) {
        if (contains(s)) out.push_back(s);
    }
    return out;
}

double ValueFactors::for_pairing(Scheme scheme, BindingConstraint binding) const noexcept {
    switch (scheme) {
        case Scheme::V2G:
            return binding == BindingConstraint::Energy ? v2g_energy : v2g_power;
        case Scheme::SmartCharging: return smart_charging;
        case Scheme::SmartHeatPump:
        case Scheme::HeatPumpThermalStorage: return heat_pump;
    }
    return 1.0;
}

ValueFactors ValueFactors::with(const ValueFactorOverrides& o) const noexcept {
    ValueFactors out = *this;
    if (o.smart_charging) out.smart_charging = *o.smart_charging;
    if (o.heat_pump) out.heat_pump = *o.heat_pump;
    if (o.v2g_power) out.v2g_power = *o.v2g_power;
    if (o.v2g_energy) out.v2g_energy = *o.v2g_energy;
    return out;
}

ParameterSet default_parameters() { return ParameterSet{}; }

std::vector<ApplicationSpec> default_applications() {
    const SchemeSet all = SchemeSet::all();
    const SchemeSet v2g_only{Scheme::V2G};
    const SchemeSet none{};
    auto mw = [](double v) { return v * 1000.0; };
    return {
        {"Energy arbitrage", mw(100), 4.0, 300, all},
        {"Primary response", mw(10), 0.5, 5000, all},
        {"Secondary response", mw(100), 1.0, 1000, all},
        {"Tertiary response", mw(100), 4.0, 10, all},
        {"Peaker replacement", mw(100), 4.0, 50, all},
        {"Black start", mw(10), 1.0, 10, v2g_only},
        {"Seasonal storage", mw(100), 700.0, 3, none},
        {"T&D investment deferral", mw(100), 8.0, 300, all},
        {"Congestion management", mw(100), 1.0, 300, all},
        {"Bill management", mw(1), 4.0, 500, all},
        {"Power quality", mw(1), 0.5, 100, v2g_only},
        {"Power reliability", mw(1), 8.0, 50, v2g_only},
    };
}

const ApplicationSpec* find_application(std::span<const ApplicationSpec> apps,
                                        std::string_view name) noexcept {
    for (const auto& a : apps) {
        if (a.name == name) return &a;
    }
    return nullptr;
}

std::string NumericField::path() const {
    std::string out{section};
    out += '.';
    out += key;
    return out;
}

namespace {

using D = NumericField::Domain;

// Captureless lambdas decay to the field accessor pointer.
#define LCODR_FIELD(sec, member, key, dom, pert) \
    NumericField{sec, key, dom, pert, [](ParameterSet& p) -> double& { return p.member; }}

const std::vector<NumericField>& registry() {
    static const std::vector<NumericField> fields{
        LCODR_FIELD("ev", ev.charger_power_kw, "charger_power_kw", D::Positive, true),
        LCODR_FIELD("ev", ev.charger_efficiency, "charger_efficiency", D::UnitOpenBelow, true),
        LCODR_FIELD("ev", ev.battery_capacity_kwh, "battery_capacity_kwh", D::Positive, true),
        LCODR_FIELD("ev", ev.guaranteed_min_charge, "guaranteed_min_charge", D::UnitOpenAbove, true),
        LCODR_FIELD("ev", ev.daily_drive_energy_kwh, "daily_drive_energy_kwh", D::NonNegative, true),
        LCODR_FIELD("ev", ev.home_charge_fraction, "home_charge_fraction", D::UnitInterval, true),
        LCODR_FIELD("ev", ev.base_plugin_time_h, "base_plugin_time_h", D::Positive, true),
        LCODR_FIELD("ev", ev.v2g_reward_base, "v2g_reward_base", D::NonNegative, true),
        LCODR_FIELD("ev", ev.v2g_reward_per_hour, "v2g_reward_per_hour", D::NonNegative, true),
        LCODR_FIELD("ev", ev.sc_reward_base, "sc_reward_base", D::NonNegative, true),
        LCODR_FIELD("ev", ev.sc_reward_per_hour, "sc_reward_per_hour", D::NonNegative, true),

        LCODR_FIELD("heat", heat.avg_power_kw, "avg_power_kw", D::Positive, true),
        LCODR_FIELD("heat", heat.active_power_kw, "active_power_kw", D::Positive, true),
        LCODR_FIELD("heat", heat.seasonal_performance_factor, "seasonal_performance_factor", D::Positive, true),
        LCODR_FIELD("heat", heat.building_heat_capacity_kj_per_k, "building_heat_capacity_kj_per_k", D::Positive, true),
        LCODR_FIELD("heat", heat.temp_divergence_k, "temp_divergence_k", D::NonNegative, true),
        LCODR_FIELD("heat", heat.max_activations_per_month, "max_activations_per_month", D::Positive, true),
        LCODR_FIELD("heat", heat.reward_per_thermostat, "reward_per_thermostat", D::NonNegative, true),
        LCODR_FIELD("heat", heat.reward_per_m2, "reward_per_m2", D::NonNegative, true),
        LCODR_FIELD("heat", heat.water_density_kg_per_m3, "water_density_kg_per_m3", D::Positive, true),
        LCODR_FIELD("heat", heat.water_heat_capacity_kj_per_kg_k, "water_heat_capacity_kj_per_kg_k", D::Positive, true),
        LCODR_FIELD("heat", heat.tank_temp_range_k, "tank_temp_range_k", D::Positive, true),
        LCODR_FIELD("heat", heat.wall_thickness_m, "wall_thickness_m", D::NonNegative, true),
        LCODR_FIELD("heat", heat.ceiling_height_m, "ceiling_height_m", D::Positive, true),

        LCODR_FIELD("economics", econ.discount_rate, "discount_rate", D::UnitOpenAbove, true),
        LCODR_FIELD("economics", econ.electricity_price_per_kwh, "electricity_price_per_kwh", D::Positive, true),
        LCODR_FIELD("economics", econ.capex_v2g_charger, "capex_v2g_charger", D::NonNegative, true),
        LCODR_FIELD("economics", econ.capex_smart_charger, "capex_smart_charger", D::NonNegative, true),
        LCODR_FIELD("economics", econ.capex_thermostat, "capex_thermostat", D::NonNegative, true),
        LCODR_FIELD("economics", econ.capex_tank_per_m3, "capex_tank_per_m3", D::NonNegative, true),
        LCODR_FIELD("economics", econ.om_fraction, "om_fraction", D::NonNegative, true),
        LCODR_FIELD("economics", econ.eol_v2g_per_charger, "eol_v2g_per_charger", D::NonNegative, true),
        LCODR_FIELD("economics", econ.eol_tank_per_m2, "eol_tank_per_m2", D::NonNegative, true),
        LCODR_FIELD("economics", econ.reward_floor, "reward_floor", D::NonNegative, false),
    };
    return fields;
}

#undef LCODR_FIELD

std::string fmt_value(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void check_domain(const NumericField& f, double v) {
    auto fail = [&](const char* what) {
        throw ValidationError(f.path(), std::string("must be ") + what + ", got " + fmt_value(v));
    };
    if (!std::isfinite(v)) fail("finite");
    switch (f.domain) {
        case D::Positive:
            if (!(v > 0.0)) fail("> 0");
            break;
        case D::NonNegative:
            if (!(v >= 0.0)) fail(">= 0");
            break;
        case D::UnitInterval:
            if (!(v >= 0.0 && v <= 1.0)) fail("in [0, 1]");
            break;
        case D::UnitOpenAbove:
            if (!(v >= 0.0 && v < 1.0)) fail("in [0, 1)");
            break;
        case D::UnitOpenBelow:
            if (!(v > 0.0 && v <= 1.0)) fail("in (0, 1]");
            break;
    }
}

}  // namespace

std::span<const NumericField> numeric_fields() { return registry(); }

void validate(const ParameterSet& p) {
    for (const auto& f : registry()) check_domain(f, f.get(p));

    if (p.econ.lifetime_years < 1) {
        throw ValidationError("economics.lifetime_years", "must be >= 1");
    }
    if (!(p.ev.daily_charge_time_h() < 24.0)) {
        throw ValidationError("ev.daily_drive_energy_kwh",
                              "daily home charging time must be below 24 h");
    }
    if (!(p.ev.base_plugin_time_h <= 24.0)) {
        throw ValidationError("ev.base_plugin_time_h", "must be <= 24");
    }
    if (!(p.heat.avg_power_kw <= p.heat.active_power_kw)) {
        throw ValidationError("heat.avg_power_kw", "must not exceed heat.active_power_kw");
    }
    if (!(p.heat.seasonal_performance_factor > 1.0)) {
        throw ValidationError("heat.seasonal_performance_factor", "must be > 1");
    }
    if (!(p.heat.ceiling_height_m - 2.0 * p.heat.wall_thickness_m > 0.0)) {
        throw ValidationError("heat.ceiling_height_m",
                              "must exceed twice heat.wall_thickness_m");
    }

    auto check_vf = [](const std::optional<double>& v, const char* key) {
        if (v && !(std::isfinite(*v) && *v > 0.0)) {
            throw ValidationError(std::string("value_factors.") + key, "must be > 0");
        }
    };
    check_vf(p.value_factors.smart_charging, "smart_charging");
    check_vf(p.value_factors.heat_pump, "heat_pump");
    check_vf(p.value_factors.v2g_power, "v2g_power");
    check_vf(p.value_factors.v2g_energy, "v2g_energy");
}

void validate(const ApplicationSpec& app, std::string_view path) {
    const std::string base = std::string(path) + "[" + app.name + "]";
    if (app.name.empty()) throw ValidationError(std::string(path) + ".name", "must not be empty");
    if (!(std::isfinite(app.power_capacity_kw) && app.power_capacity_kw > 0.0)) {
        throw ValidationError(base + ".power_capacity", "must be > 0");
    }
    if (!(std::isfinite(app.discharge_duration_h) && app.discharge_duration_h > 0.0)) {
        throw ValidationError(base + ".discharge_duration_h", "must be > 0");
    }
    if (!(std::isfinite(app.annual_cycles) && app.annual_cycles >= 1.0)) {
        throw ValidationError(base + ".annual_cycles", "must be >= 1");
    }
    if (app.annual_cycles * app.discharge_duration_h > 8760.0) {
        throw ValidationError(base + ".annual_cycles",
                              "cycles x discharge duration exceeds 8760 h");
    }
}

}  // namespace lcodr
