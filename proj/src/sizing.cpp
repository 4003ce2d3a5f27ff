#include "lcodr/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lcodr/errors.hpp"

namespace lcodr::sizing {

namespace {

constexpr double kHoursPerDay = 24.0;
constexpr double kKjPerKwh = 3600.0;

std::string hours(double h) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << h << " h";
    return os.str();
}

/// Thermal energy the building may drift by within the contracted band, kWh.
double building_heat_band_kwh(const HeatParameters& heat) {
    return heat.building_heat_capacity_kj_per_k * heat.temp_divergence_k / kKjPerKwh;
}

double tank_height_m(const HeatParameters& heat) {
    return heat.ceiling_height_m - 2.0 * heat.wall_thickness_m;
}

}  // namespace

std::string_view to_string(Feasibility f) noexcept {
    switch (f) {
        case Feasibility::Feasible: return "feasible";
        case Feasibility::Unsuitable: return "unsuitable";
        case Feasibility::Infeasible: return "infeasible";
    }
    return "?";
}

double SizingResult::contracted_assets_ceil() const { return std::ceil(contracted_assets); }

double v2g_chargers_for_power(double power_kw, const EvParameters& ev) {
    return power_kw / ev.effective_charger_power_kw();
}

double v2g_chargers_for_energy(const ApplicationSpec& app, const EvParameters& ev) {
    return app.power_capacity_kw * app.discharge_duration_h / ev.usable_energy_kwh();
}

RequiredAvailable v2g_required_available(const ApplicationSpec& app, const EvParameters& ev) {
    const double by_power = v2g_chargers_for_power(app.power_capacity_kw, ev);
    const double by_energy = v2g_chargers_for_energy(app, ev);
    if (by_energy > by_power) return {by_energy, BindingConstraint::Energy};
    return {by_power, BindingConstraint::Power};
}

double v2g_availability_factor(double plugin_time_h, const EvParameters& ev) {
    const double charge_time = ev.daily_charge_time_h();
    if (plugin_time_h < charge_time) {
        throw SizingError(SizingError::Kind::RptTooShort,
                          "required plug-in time " + hours(plugin_time_h) +
                              " is shorter than the daily charging time " + hours(charge_time));
    }
    if (plugin_time_h > kHoursPerDay) {
        throw SizingError(SizingError::Kind::RptOutOfRange,
                          "required plug-in time " + hours(plugin_time_h) + " exceeds 24 h");
    }
    return (plugin_time_h - charge_time) / kHoursPerDay;
}

double contracted_from_available(double available, double availability) {
    if (!(availability > 0.0)) {
        throw SizingError(SizingError::Kind::ZeroAvailability, "availability factor must be > 0");
    }
    return available / availability;
}

double unidirectional_assets(double power_kw, double shiftable_power_kw) {
    if (!(shiftable_power_kw > 0.0)) {
        throw SizingError(SizingError::Kind::ZeroShiftablePower,
                          "average shiftable power per asset must be > 0");
    }
    return power_kw / shiftable_power_kw;
}

double v2g_max_discharge_duration(double plugin_time_h, const EvParameters& ev) {
    const double recharge_h = ev.usable_energy_kwh() / ev.effective_charger_power_kw();
    const double d = (plugin_time_h - ev.daily_charge_time_h()) / 2.0 - recharge_h;
    return std::max(0.0, d);
}

double smart_charging_max_discharge_duration(double plugin_time_h, const EvParameters& ev) {
    return std::max(0.0, plugin_time_h - ev.daily_charge_time_h());
}

double min_required_plugin_time(Scheme scheme, double discharge_duration_h, const EvParameters& ev) {
    const double charge_time = ev.daily_charge_time_h();
    double required = 0.0;
    switch (scheme) {
        case Scheme::V2G: {
            const double recharge_h = ev.usable_energy_kwh() / ev.effective_charger_power_kw();
            required = 2.0 * (discharge_duration_h + recharge_h) + charge_time;
            break;
        }
        case Scheme::SmartCharging:
            required = discharge_duration_h + charge_time;
            break;
        default:
            throw SizingError(SizingError::Kind::UnsupportedScheme,
                              "plug-in time only applies to EV schemes");
    }
    if (required > kHoursPerDay) {
        throw InfeasibleError(required, "Infeasible(" + hours(required) + ")");
    }
    return required;
}

double hp_power_reduction(double discharge_duration_h, const HeatParameters& heat) {
    const double unclamped = 2.0 * building_heat_band_kwh(heat) /
                             (heat.seasonal_performance_factor * discharge_duration_h);
    return std::min(heat.active_power_kw, unclamped);
}

double hp_max_discharge_duration(const HeatParameters& heat) {
    return 2.0 * building_heat_band_kwh(heat) /
           (heat.active_power_kw * heat.seasonal_performance_factor);
}

double hp_cycle_adjusted_assets(double base_assets, double annual_cycles,
                                double max_activations_per_month,
                                Assumptions::CycleAdjustment mode) {
    const double allowance = 12.0 * max_activations_per_month;
    if (mode == Assumptions::CycleAdjustment::AsPrinted) {
        return base_assets * allowance / annual_cycles;
    }
    return base_assets * std::max(1.0, annual_cycles / allowance);
}

double tank_mass_from_area(double area_m2, const HeatParameters& heat) {
    const double radius = std::sqrt(area_m2) / 2.0 - heat.wall_thickness_m;
    const double height = tank_height_m(heat);
    if (radius < 0.0 || height <= 0.0) {
        throw SizingError(SizingError::Kind::AreaTooSmall,
                          "tank footprint leaves no room inside the insulation");
    }
    return heat.water_density_kg_per_m3 * height * std::numbers::pi * radius * radius;
}

double thermal_storage_max_discharge_duration(double area_m2, const HeatParameters& heat) {
    const double mass = tank_mass_from_area(area_m2, heat);
    const double stored_kwh =
        mass * heat.water_heat_capacity_kj_per_kg_k * heat.tank_temp_range_k / kKjPerKwh;
    return stored_kwh / (heat.active_power_kw * heat.seasonal_performance_factor);
}

TankSize min_tank_area(double discharge_duration_h, const HeatParameters& heat) {
    const double heat_kwh =
        heat.active_power_kw * heat.seasonal_performance_factor * discharge_duration_h;
    TankSize t;
    t.mass_kg = heat_kwh * kKjPerKwh /
                (heat.water_heat_capacity_kj_per_kg_k * heat.tank_temp_range_k);
    t.volume_m3 = t.mass_kg / heat.water_density_kg_per_m3;
    const double inner_radius =
        std::sqrt(t.volume_m3 / (std::numbers::pi * tank_height_m(heat)));
    const double side = 2.0 * (heat.wall_thickness_m + inner_radius);
    t.area_m2 = side * side;
    return t;
}

double smart_charging_shiftable_power(const EvParameters& ev) {
    return ev.daily_drive_energy_kwh * ev.home_charge_fraction / kHoursPerDay;
}

SizingResult size_pairing(Scheme scheme, const ApplicationSpec& app, const ParameterSet& params) {
    SizingResult r;
    r.scheme = scheme;
    if (!app.suitable_schemes.contains(scheme)) {
        r.feasibility = Feasibility::Unsuitable;
        r.reason = "scheme not suitable for this application";
        return r;
    }

    const EvParameters& ev = params.ev;
    const HeatParameters& heat = params.heat;
    const double duration = app.discharge_duration_h;

    try {
        switch (scheme) {
            case Scheme::V2G: {
                const auto need = v2g_required_available(app, ev);
                r.available_assets = need.count;
                r.binding = need.binding;
                const double rpt = min_required_plugin_time(scheme, duration, ev);
                r.required_plugin_time_h = rpt;
                r.contracted_assets =
                    contracted_from_available(need.count, v2g_availability_factor(rpt, ev));
                break;
            }
            case Scheme::SmartCharging: {
                const double shiftable = smart_charging_shiftable_power(ev);
                r.shiftable_power_kw = shiftable;
                r.contracted_assets = unidirectional_assets(app.power_capacity_kw, shiftable);
                r.available_assets = r.contracted_assets;
                r.required_plugin_time_h = min_required_plugin_time(scheme, duration, ev);
                break;
            }
            case Scheme::SmartHeatPump: {
                const double reduction = hp_power_reduction(duration, heat);
                r.power_reduction_kw = reduction;
                const double shiftable = heat.avg_power_kw * reduction / heat.active_power_kw;
                r.shiftable_power_kw = shiftable;
                r.available_assets = unidirectional_assets(app.power_capacity_kw, shiftable);
                r.contracted_assets =
                    hp_cycle_adjusted_assets(r.available_assets, app.annual_cycles,
                                             heat.max_activations_per_month,
                                             params.assumptions.cycle_adjustment);
                break;
            }
            case Scheme::HeatPumpThermalStorage: {
                r.tank = min_tank_area(duration, heat);
                r.power_reduction_kw = heat.active_power_kw;
                const double shiftable =
                    params.assumptions.storage_fleet_basis == Assumptions::StorageFleetBasis::ActivePower
                        ? heat.active_power_kw
                        : heat.avg_power_kw;
                r.shiftable_power_kw = shiftable;
                r.contracted_assets = unidirectional_assets(app.power_capacity_kw, shiftable);
                r.available_assets = r.contracted_assets;
                break;
            }
        }
    } catch (const SizingError& e) {
        r.feasibility = Feasibility::Infeasible;
        r.reason = e.what();
    }
    return r;
}

}  // namespace lcodr::sizing
