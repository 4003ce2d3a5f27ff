#pragma once

#include <array>
#include <optional>
#include <string>

#include "lcodr/model.hpp"
#include "lcodr/sizing.hpp"

namespace lcodr::costing {

/// Undiscounted lifetime cash flows of one sized pairing. Annual amounts are
/// constant over years 1..T; end-of-life falls in year T+1.
struct CashFlowSchedule {
    double investment_t0 = 0.0;     ///< $
    double annual_om = 0.0;         ///< $/yr
    double annual_rewards = 0.0;    ///< $/yr
    double annual_rebound = 0.0;    ///< $/yr
    double eol_at_t_plus_1 = 0.0;   ///< $
    double annual_energy_mwh = 0.0;
    int lifetime_years = 15;
    double discount_rate = 0.0;
};

enum class CostComponent : std::uint8_t { Investment, OM, Rewards, Rebound, EndOfLife };
inline constexpr std::size_t kCostComponents = 5;

struct CostBreakdown {
    double investment = 0.0;
    double om_pv = 0.0;
    double rewards_pv = 0.0;
    double rebound_pv = 0.0;
    double eol_pv = 0.0;
    double energy_pv_mwh = 0.0;
    double lcodr_energy = 0.0;  ///< $/MWh
    double lcodr_power = 0.0;   ///< $/kW-year
    double value_factor = 1.0;
    double lcodr_vf = 0.0;      ///< $/MWh

    double total_cost() const noexcept {
        return investment + om_pv + rewards_pv + rebound_pv + eol_pv;
    }
    /// Component fractions of the discounted cost, in CostComponent order.
    std::array<double, kCostComponents> shares() const noexcept;
};

/// EV reward with base hours `base_hours`, floored at `floor`.
double ev_monthly_reward(double base, double per_hour, double plugin_time_h, double base_hours,
                         double floor);

/// $/month paid to each contracted asset.
double monthly_reward_per_asset(Scheme scheme, const sizing::SizingResult& sizing,
                                const ParameterSet& params);

/// Grid energy bought per unit of shifted energy.
double rebound_factor(Scheme scheme, const ParameterSet& params);

/// Throws CostingError(InfeasibleInput) when the sizing is not feasible.
CashFlowSchedule build_cash_flows(Scheme scheme, const ApplicationSpec& app,
                                  const sizing::SizingResult& sizing, const ParameterSet& params);

/// amount * sum_{t=1..T} (1+r)^-t, summed year by year.
double present_value_annual(double amount, double discount_rate, int years);

double lcodr_energy(const CashFlowSchedule& cf);
double lcodr_power(const CashFlowSchedule& cf, double power_kw);
double apply_value_factor(double lcodr, double value_factor);

/// Discounted components plus both LCODR variants. value_factor is applied.
CostBreakdown levelise(const CashFlowSchedule& cf, double power_kw, double value_factor);

struct PairingResult {
    Scheme scheme = Scheme::V2G;
    std::string application;
    sizing::SizingResult sizing;
    std::optional<double> monthly_reward;
    std::optional<CostBreakdown> cost;  ///< absent for unsuitable or infeasible pairings

    bool ok() const noexcept { return cost.has_value(); }
};

/// Size, cost and value-adjust one pairing. For V2G the power or energy
/// value factor is chosen by the binding sizing constraint.
PairingResult evaluate_pairing(Scheme scheme, const ApplicationSpec& app,
                               const ParameterSet& params, const ValueFactors& vf);

}  // namespace lcodr::costing
