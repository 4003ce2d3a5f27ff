#pragma once

#include <cstdint>
#include <vector>

#include "lcodr/model.hpp"
#include "lcodr/timeseries.hpp"

/// Seeded stand-ins for the half-hourly price series and the per-asset
/// charging, heating and V2G plug-in data the case study is built on.
namespace lcodr::synth {

/// Daily Gaussian bump, wrapped around midnight.
struct DailyPeak {
    double hour = 0.0;
    double width_h = 1.0;
    double amplitude = 0.0;
};

struct SyntheticSpec {
    Timestamp start = std::chrono::sys_days{std::chrono::year{2023} / 1 / 1};
    int days = 365;
    std::chrono::seconds interval{1800};
    std::size_t assets = 200;

    // Price: (1 + seasonal) * (1 + sum of daily peaks) * lognormal noise.
    double mean_price_per_kwh = 0.05;
    double price_seasonal_amplitude = 0.15;
    std::vector<DailyPeak> price_peaks{{8.0, 1.5, 0.22}, {18.5, 1.6, 0.55}, {3.5, 2.5, -0.18}};
    double price_noise_sigma = 0.12;

    // Home charging: one evening session on plug-in days.
    double ev_arrival_min_h = 17.0;
    double ev_arrival_max_h = 19.5;
    double ev_arrival_sd_h = 1.5;
    double ev_plug_probability = 0.8;

    // V2G: overnight plug-in sessions.
    double v2g_arrival_min_h = 16.5;
    double v2g_arrival_max_h = 19.0;
    double v2g_departure_min_h = 7.0;
    double v2g_departure_max_h = 9.0;
    double v2g_arrival_sd_h = 1.5;
    double v2g_departure_sd_h = 1.0;
    double v2g_plug_probability = 0.85;
    double v2g_min_drive_days = 0.5;  ///< driving energy used before arrival, in days
    double v2g_max_drive_days = 2.5;

    // Heating: base load plus morning and evening peaks, scaled by season.
    double hp_base = 0.45;
    DailyPeak hp_morning{7.0, 1.3, 0.9};
    DailyPeak hp_evening{18.5, 2.0, 0.8};
    double hp_shift_h = 1.0;           ///< per-asset peak shift drawn from [-x, x]
    double hp_scale_spread = 0.3;      ///< per-asset scale drawn from [1-x, 1+x]
    double hp_seasonal_floor = 0.08;
    double hp_daily_noise_sigma = 0.10;

    EvParameters ev;
    HeatParameters heat;
};

struct SyntheticBundle {
    TimeSeries price;
    std::vector<AvailabilityProfile> ev_charging;  ///< smart-charging load per asset
    std::vector<AvailabilityProfile> heat_pump;    ///< heat-pump load per asset
    std::vector<AvailabilityProfile> v2g_power;    ///< exportable power per asset
    std::vector<AvailabilityProfile> v2g_energy;   ///< stored-energy band per asset
};

/// Values are rounded (1e-6 $/kWh, 1e-4 kW or kWh) so the written files read
/// back to the same doubles.
TimeSeries generate_price(const SyntheticSpec& spec, std::uint64_t seed);
SyntheticBundle generate_synthetic_profiles(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace lcodr::synth
