#include "lcodr/costing.hpp"

#include <algorithm>
#include <cmath>

#include "lcodr/errors.hpp"

namespace lcodr::costing {

namespace {

constexpr double kMonthsPerYear = 12.0;
constexpr double kKwhPerMwh = 1000.0;

double capex_per_asset(Scheme scheme, const sizing::SizingResult& s, const EconomicParameters& e) {
    switch (scheme) {
        case Scheme::V2G: return e.capex_v2g_charger;
        case Scheme::SmartCharging: return e.capex_smart_charger;
        case Scheme::SmartHeatPump: return e.capex_thermostat;
        case Scheme::HeatPumpThermalStorage:
            return e.capex_thermostat + e.capex_tank_per_m3 * s.tank.value().volume_m3;
    }
    return 0.0;
}

double eol_per_asset(Scheme scheme, const sizing::SizingResult& s, const EconomicParameters& e) {
    switch (scheme) {
        case Scheme::V2G: return e.eol_v2g_per_charger;
        case Scheme::HeatPumpThermalStorage: return e.eol_tank_per_m2 * s.tank.value().area_m2;
        default: return 0.0;
    }
}

double end_of_life_pv(const CashFlowSchedule& cf) {
    return cf.eol_at_t_plus_1 / std::pow(1.0 + cf.discount_rate, cf.lifetime_years + 1);
}

double annual_costs(const CashFlowSchedule& cf) {
    return cf.annual_om + cf.annual_rewards + cf.annual_rebound;
}

}  // namespace

std::array<double, kCostComponents> CostBreakdown::shares() const noexcept {
    const double total = total_cost();
    if (!(total > 0.0)) return {};
    return {investment / total, om_pv / total, rewards_pv / total, rebound_pv / total,
            eol_pv / total};
}

double ev_monthly_reward(double base, double per_hour, double plugin_time_h, double base_hours,
                         double floor) {
    return std::max(floor, base + (plugin_time_h - base_hours) * per_hour);
}

double monthly_reward_per_asset(Scheme scheme, const sizing::SizingResult& sizing,
                                const ParameterSet& params) {
    const auto& ev = params.ev;
    const double floor = params.econ.reward_floor;
    switch (scheme) {
        case Scheme::V2G:
            return ev_monthly_reward(ev.v2g_reward_base, ev.v2g_reward_per_hour,
                                     sizing.required_plugin_time_h.value(), ev.base_plugin_time_h,
                                     floor);
        case Scheme::SmartCharging:
            return ev_monthly_reward(ev.sc_reward_base, ev.sc_reward_per_hour,
                                     sizing.required_plugin_time_h.value(), ev.base_plugin_time_h,
                                     floor);
        case Scheme::SmartHeatPump:
            return params.heat.reward_per_thermostat;
        case Scheme::HeatPumpThermalStorage:
            return std::max(floor, params.heat.reward_per_m2 * sizing.tank.value().area_m2);
    }
    return 0.0;
}

double rebound_factor(Scheme scheme, const ParameterSet& params) {
    if (scheme == Scheme::V2G &&
        params.assumptions.v2g_rebound == Assumptions::V2GRebound::RoundTripLoss) {
        const double eta = params.ev.charger_efficiency;
        return 1.0 / (eta * eta);
    }
    return 1.0;
}

CashFlowSchedule build_cash_flows(Scheme scheme, const ApplicationSpec& app,
                                  const sizing::SizingResult& sizing, const ParameterSet& params) {
    if (!sizing.feasible()) {
        throw CostingError(CostingError::Kind::InfeasibleInput,
                           "cannot cost an infeasible pairing: " + sizing.reason);
    }
    const auto& e = params.econ;
    const double n = sizing.contracted_assets;

    CashFlowSchedule cf;
    cf.lifetime_years = e.lifetime_years;
    cf.discount_rate = e.discount_rate;
    cf.investment_t0 = n * capex_per_asset(scheme, sizing, e);
    cf.annual_om = e.om_fraction * cf.investment_t0;
    cf.annual_rewards = kMonthsPerYear * n * monthly_reward_per_asset(scheme, sizing, params);
    cf.annual_energy_mwh = app.annual_energy_mwh();
    cf.annual_rebound = cf.annual_energy_mwh * (e.electricity_price_per_kwh * kKwhPerMwh) *
                        rebound_factor(scheme, params);
    cf.eol_at_t_plus_1 = n * eol_per_asset(scheme, sizing, e);
    return cf;
}

double present_value_annual(double amount, double discount_rate, int years) {
    double pv = 0.0;
    double growth = 1.0;
    for (int t = 1; t <= years; ++t) {
        growth *= 1.0 + discount_rate;
        pv += amount / growth;
    }
    return pv;
}

// Annual flows are constant, so PV(x)/PV(E) reduces to x/E. Using the reduced
// form keeps the rebound-only cost exactly equal to the electricity price.
double lcodr_energy(const CashFlowSchedule& cf) {
    if (!(cf.annual_energy_mwh > 0.0)) {
        throw CostingError(CostingError::Kind::ZeroEnergy, "annual shifted energy must be > 0");
    }
    const double energy_pv =
        present_value_annual(cf.annual_energy_mwh, cf.discount_rate, cf.lifetime_years);
    return (cf.investment_t0 + end_of_life_pv(cf)) / energy_pv +
           annual_costs(cf) / cf.annual_energy_mwh;
}

double lcodr_power(const CashFlowSchedule& cf, double power_kw) {
    if (!(power_kw > 0.0)) {
        throw CostingError(CostingError::Kind::ZeroEnergy, "power capacity must be > 0");
    }
    const double capacity_pv = present_value_annual(power_kw, cf.discount_rate, cf.lifetime_years);
    return (cf.investment_t0 + end_of_life_pv(cf)) / capacity_pv + annual_costs(cf) / power_kw;
}

double apply_value_factor(double lcodr, double value_factor) {
    if (!(value_factor > 0.0)) {
        throw CostingError(CostingError::Kind::NonPositiveValueFactor, "value factor must be > 0");
    }
    return lcodr / value_factor;
}

CostBreakdown levelise(const CashFlowSchedule& cf, double power_kw, double value_factor) {
    const double r = cf.discount_rate;
    const int years = cf.lifetime_years;
    CostBreakdown b;
    b.investment = cf.investment_t0;
    b.om_pv = present_value_annual(cf.annual_om, r, years);
    b.rewards_pv = present_value_annual(cf.annual_rewards, r, years);
    b.rebound_pv = present_value_annual(cf.annual_rebound, r, years);
    b.eol_pv = end_of_life_pv(cf);
    b.energy_pv_mwh = present_value_annual(cf.annual_energy_mwh, r, years);
    b.lcodr_energy = lcodr_energy(cf);
    b.lcodr_power = lcodr_power(cf, power_kw);
    b.value_factor = value_factor;
    b.lcodr_vf = apply_value_factor(b.lcodr_energy, value_factor);
    return b;
}

PairingResult evaluate_pairing(Scheme scheme, const ApplicationSpec& app,
                               const ParameterSet& params, const ValueFactors& vf) {
    PairingResult out;
    out.scheme = scheme;
    out.application = app.name;
    out.sizing = sizing::size_pairing(scheme, app, params);
    if (!out.sizing.feasible()) return out;

    out.monthly_reward = monthly_reward_per_asset(scheme, out.sizing, params);
    const auto cf = build_cash_flows(scheme, app, out.sizing, params);
    out.cost = levelise(cf, app.power_capacity_kw, vf.for_pairing(scheme, out.sizing.binding));
    return out;
}

}  // namespace lcodr::costing
