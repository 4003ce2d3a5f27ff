#pragma once

#include <optional>
#include <string>

#include "lcodr/model.hpp"

/// Fleet sizing for a (scheme, application) pairing.
///
/// All counts are real-valued. Durations are in hours, powers in kW.
namespace lcodr::sizing {

struct RequiredAvailable {
    double count = 0.0;
    BindingConstraint binding = BindingConstraint::Power;
};

struct TankSize {
    double area_m2 = 0.0;    ///< rented floor area
    double volume_m3 = 0.0;  ///< water volume
    double mass_kg = 0.0;
};

enum class Feasibility : std::uint8_t { Feasible, Unsuitable, Infeasible };
std::string_view to_string(Feasibility f) noexcept;

struct SizingResult {
    Scheme scheme = Scheme::V2G;
    double contracted_assets = 0.0;
    double available_assets = 0.0;
    /// Average shiftable power per contracted unidirectional asset.
    std::optional<double> shiftable_power_kw;
    std::optional<double> required_plugin_time_h;  ///< EV schemes
    std::optional<double> power_reduction_kw;      ///< heat-pump schemes
    std::optional<TankSize> tank;                  ///< thermal storage
    BindingConstraint binding = BindingConstraint::NotApplicable;
    Feasibility feasibility = Feasibility::Feasible;
    std::string reason;

    bool feasible() const noexcept { return feasibility == Feasibility::Feasible; }
    /// Whole-asset count, reported for information only.
    double contracted_assets_ceil() const;
};

double v2g_chargers_for_power(double power_kw, const EvParameters& ev);
double v2g_chargers_for_energy(const ApplicationSpec& app, const EvParameters& ev);
/// Larger of the power and energy counts. Ties resolve to Power.
RequiredAvailable v2g_required_available(const ApplicationSpec& app, const EvParameters& ev);

/// Fraction of the day a V2G charger is plugged in and not charging.
/// Throws RptTooShort / RptOutOfRange outside [daily charge time, 24].
double v2g_availability_factor(double plugin_time_h, const EvParameters& ev);
double contracted_from_available(double available, double availability);
double unidirectional_assets(double power_kw, double shiftable_power_kw);

/// Discharge starts halfway through the plug-in window; the time to charge
/// driving energy and to recharge the usable battery band is unavailable.
/// Clamped at 0.
double v2g_max_discharge_duration(double plugin_time_h, const EvParameters& ev);
double smart_charging_max_discharge_duration(double plugin_time_h, const EvParameters& ev);

/// Smallest daily plug-in time whose forward duration reaches
/// `discharge_duration_h`. Throws InfeasibleError above 24 h.
double min_required_plugin_time(Scheme scheme, double discharge_duration_h, const EvParameters& ev);

double hp_power_reduction(double discharge_duration_h, const HeatParameters& heat);
double hp_max_discharge_duration(const HeatParameters& heat);
double hp_cycle_adjusted_assets(double base_assets, double annual_cycles,
                                double max_activations_per_month,
                                Assumptions::CycleAdjustment mode = Assumptions::CycleAdjustment::TextDirection);

double tank_mass_from_area(double area_m2, const HeatParameters& heat);
double thermal_storage_max_discharge_duration(double area_m2, const HeatParameters& heat);
TankSize min_tank_area(double discharge_duration_h, const HeatParameters& heat);

/// Average shiftable power of a smart charger (home charging energy spread
/// over the day).
double smart_charging_shiftable_power(const EvParameters& ev);

/// Runs the full sizing chain. Unsuitable and infeasible pairings come back
/// with `feasible() == false` and a reason; nothing is thrown for them.
SizingResult size_pairing(Scheme scheme, const ApplicationSpec& app, const ParameterSet& params);

}  // namespace lcodr::sizing
