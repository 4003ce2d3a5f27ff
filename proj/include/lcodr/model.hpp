#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lcodr {

// Internal units: kW, kWh, hours, years, US dollars. Application power is
// given in MW in the published tables and converted to kW on load.

enum class Scheme : std::uint8_t {
    V2G,
    SmartCharging,
    SmartHeatPump,
    HeatPumpThermalStorage,
};

inline constexpr std::array<Scheme, 4> kAllSchemes{
    Scheme::V2G,
    Scheme::SmartCharging,
    Scheme::SmartHeatPump,
    Scheme::HeatPumpThermalStorage,
};

std::string_view to_string(Scheme scheme) noexcept;
std::optional<Scheme> parse_scheme(std::string_view text) noexcept;

/// Unidirectional schemes only shift load; they cannot export power.
constexpr bool is_unidirectional(Scheme s) noexcept { return s != Scheme::V2G; }
constexpr bool is_ev_scheme(Scheme s) noexcept {
    return s == Scheme::V2G || s == Scheme::SmartCharging;
}

/// Small value-type set of schemes.
class SchemeSet {
public:
    constexpr SchemeSet() = default;
    constexpr SchemeSet(std::initializer_list<Scheme> schemes) {
        for (auto s : schemes) insert(s);
    }

    constexpr void insert(Scheme s) noexcept { bits_ |= bit(s); }
    constexpr bool contains(Scheme s) const noexcept { return (bits_ & bit(s)) != 0; }
    constexpr bool empty() const noexcept { return bits_ == 0; }
    std::vector<Scheme> to_vector() const;

    constexpr bool operator==(const SchemeSet&) const = default;

    static constexpr SchemeSet all() {
        return {Scheme::V2G, Scheme::SmartCharging, Scheme::SmartHeatPump,
                Scheme::HeatPumpThermalStorage};
    }

private:
    static constexpr std::uint8_t bit(Scheme s) noexcept {
        return static_cast<std::uint8_t>(1U << static_cast<unsigned>(s));
    }
    std::uint8_t bits_ = 0;
};

struct ApplicationSpec {
    std::string name;
    double power_capacity_kw = 0.0;
    double discharge_duration_h = 0.0;
    double annual_cycles = 0.0;  ///< cycles per year
    SchemeSet suitable_schemes;

    double annual_energy_mwh() const noexcept {
        return power_capacity_kw * discharge_duration_h * annual_cycles / 1000.0;
    }

    bool operator==(const ApplicationSpec&) const = default;
};

struct EvParameters {
    double charger_power_kw = 7.4;
    double charger_efficiency = 0.92;
    double battery_capacity_kwh = 60.0;
    double guaranteed_min_charge = 0.30;   ///< fraction of capacity never discharged
    double daily_drive_energy_kwh = 5.56;
    double home_charge_fraction = 0.90;
    double base_plugin_time_h = 11.5;      ///< plug-in hours priced by the base reward
    double v2g_reward_base = 59.1;         ///< $/month/charger
    double v2g_reward_per_hour = 29.0;     ///< $/month per extra hour of plug-in
    double sc_reward_base = 40.8;
    double sc_reward_per_hour = 11.8;

    double effective_charger_power_kw() const noexcept {
        return charger_power_kw * charger_efficiency;
    }
    /// Derived, never stored.
    double min_energy_kwh() const noexcept { return battery_capacity_kwh * guaranteed_min_charge; }
    double usable_energy_kwh() const noexcept {
        return battery_capacity_kwh * (1.0 - guaranteed_min_charge);
    }
    /// Hours per day spent charging the home share of driving energy.
    double daily_charge_time_h() const noexcept {
        return daily_drive_energy_kwh * home_charge_fraction / effective_charger_power_kw();
    }

    bool operator==(const EvParameters&) const = default;
};

struct HeatParameters {
    double avg_power_kw = 0.46;
    double active_power_kw = 1.68;                 ///< average draw while switched on
    double seasonal_performance_factor = 2.71;
    double building_heat_capacity_kj_per_k = 34780.0;
    double temp_divergence_k = 1.67;
    double max_activations_per_month = 3.33;
    double reward_per_thermostat = 10.7;           ///< $/month
    double reward_per_m2 = 17.7;                   ///< $/month per m² of tank footprint
    double water_density_kg_per_m3 = 1000.0;
    double water_heat_capacity_kj_per_kg_k = 4.18;
    double tank_temp_range_k = 35.0;
    double wall_thickness_m = 0.05;
    double ceiling_height_m = 2.3;

    bool operator==(const HeatParameters&) const = default;
};

struct EconomicParameters {
    double discount_rate = 0.08;
    int lifetime_years = 15;
    double electricity_price_per_kwh = 0.05;
    double capex_v2g_charger = 3000.0;
    double capex_smart_charger = 107.0;
    double capex_thermostat = 85.0;
    double capex_tank_per_m3 = 2042.0;
    double om_fraction = 0.05;         ///< of capital investment, per year
    double eol_v2g_per_charger = 50.0;
    double eol_tank_per_m2 = 10.0;
    double reward_floor = 5.0;         ///< $/month per asset

    bool operator==(const EconomicParameters&) const = default;
};

/// Per-scheme value-factor overrides supplied through configuration.
struct ValueFactorOverrides {
    std::optional<double> smart_charging;
    std::optional<double> heat_pump;
    std::optional<double> v2g_power;
    std::optional<double> v2g_energy;

    bool operator==(const ValueFactorOverrides&) const = default;
};

enum class BindingConstraint : std::uint8_t { Power, Energy, NotApplicable };
std::string_view to_string(BindingConstraint b) noexcept;

/// Resolved value factors. Both heat-pump schemes share one value because
/// their availability comes from the same uncontrolled heating load.
struct ValueFactors {
    double smart_charging = 1.0;
    double heat_pump = 1.0;
    double v2g_power = 1.0;
    double v2g_energy = 1.0;

    double for_pairing(Scheme scheme, BindingConstraint binding) const noexcept;
    ValueFactors with(const ValueFactorOverrides& o) const noexcept;

    bool operator==(const ValueFactors&) const = default;
};

/// Toggles between the default modelling choices and literal alternatives.
struct Assumptions {
    enum class CycleAdjustment : std::uint8_t {
        TextDirection,  ///< N_1D * max(1, cycles / (12 f_max))
        AsPrinted,      ///< N_1D * 12 f_max / cycles
    };
    enum class V2GRebound : std::uint8_t { RoundTripLoss, Unity };
    enum class StorageFleetBasis : std::uint8_t {
        ActivePower,   ///< each activation cuts the full active draw
        AveragePower,  ///< fleet sized on the long-run average draw
    };

    CycleAdjustment cycle_adjustment = CycleAdjustment::TextDirection;
    V2GRebound v2g_rebound = V2GRebound::RoundTripLoss;
    StorageFleetBasis storage_fleet_basis = StorageFleetBasis::ActivePower;

    bool operator==(const Assumptions&) const = default;
};

struct ParameterSet {
    EvParameters ev;
    HeatParameters heat;
    EconomicParameters econ;
    ValueFactorOverrides value_factors;
    Assumptions assumptions;

    bool operator==(const ParameterSet&) const = default;
};

/// Parameters plus the application list, as read from one config file.
struct Config {
    ParameterSet params;
    std::vector<ApplicationSpec> applications;
};

inline constexpr int kConfigSchemaVersion = 1;

ParameterSet default_parameters();
std::vector<ApplicationSpec> default_applications();
const ApplicationSpec* find_application(std::span<const ApplicationSpec> apps,
                                        std::string_view name) noexcept;

/// Throws ValidationError naming the first field that breaks an invariant.
void validate(const ParameterSet& params);
void validate(const ApplicationSpec& app, std::string_view path = "applications");

/// One perturbable or configurable real-valued parameter.
struct NumericField {
    enum class Domain : std::uint8_t {
        Positive,         ///< (0, inf)
        NonNegative,      ///< [0, inf)
        UnitInterval,     ///< [0, 1]
        UnitOpenAbove,    ///< [0, 1)
        UnitOpenBelow,    ///< (0, 1]
    };

    std::string_view section;
    std::string_view key;
    Domain domain;
    bool perturbed;  ///< drawn in Monte-Carlo runs
    double& (*ref)(ParameterSet&);

    double get(const ParameterSet& p) const { return ref(const_cast<ParameterSet&>(p)); }
    std::string path() const;
};

/// Registry of every real-valued parameter, in a stable order. The index of
/// a field is its Monte-Carlo parameter id.
std::span<const NumericField> numeric_fields();

/// Sets one assumption toggle from its configuration spelling, e.g.
/// ("cycle_adjustment", "as_printed"). Throws ValidationError.
void apply_assumption(Assumptions& a, std::string_view key, std::string_view value);
/// (key, value) pairs in configuration spelling.
std::vector<std::pair<std::string, std::string>> describe(const Assumptions& a);

Config parse_config(std::string_view text, const std::string& origin = "<string>");
Config load_config(const std::filesystem::path& path);
/// Canonical JSON rendering (sorted keys, shortest round-trip numbers).
std::string serialize_config(const Config& config);

}  // namespace lcodr
