#include "lcodr/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "lcodr/random.hpp"

namespace lcodr::synth {

namespace {

constexpr std::uint64_t kPriceStream = 1;
constexpr std::uint64_t kEvStream = 2;
constexpr std::uint64_t kV2GStream = 3;
constexpr std::uint64_t kHeatStream = 4;

using Uniform = std::uniform_real_distribution<double>;
using Normal = std::normal_distribution<double>;

double round_to(double v, double step) { return std::round(v / step) * step; }

double bump(double hour_of_day, const DailyPeak& p) {
    const double dx = std::fmod(hour_of_day - p.hour + 36.0, 24.0) - 12.0;
    return p.amplitude * std::exp(-0.5 * (dx / p.width_h) * (dx / p.width_h));
}

double seasonal(int day) { return std::cos(2.0 * std::numbers::pi * (day - 15) / 365.0); }

struct Grid {
    std::size_t slots = 0;
    double step_h = 0.0;

    explicit Grid(const SyntheticSpec& spec) {
        const auto step = spec.interval.count();
        if (step <= 0 || 86400 % step != 0 || spec.days < 1) {
            throw std::invalid_argument("synthetic grid needs >= 1 day and an interval dividing 24 h");
        }
        slots = static_cast<std::size_t>(spec.days) * static_cast<std::size_t>(86400 / step);
        step_h = static_cast<double>(step) / 3600.0;
    }

    double midpoint_h(std::size_t s) const { return (static_cast<double>(s) + 0.5) * step_h; }

    /// Adds `power` over [t0, t1) hours, averaged into each slot.
    void add_block(std::vector<double>& v, double t0, double t1, double power) const {
        const double horizon = static_cast<double>(slots) * step_h;
        t0 = std::max(t0, 0.0);
        t1 = std::min(t1, horizon);
        if (t1 <= t0) return;
        const auto first = static_cast<std::size_t>(t0 / step_h);
        const auto last = std::min(slots - 1, static_cast<std::size_t>(t1 / step_h));
        for (std::size_t s = first; s <= last; ++s) {
            const double lo = static_cast<double>(s) * step_h;
            const double overlap = std::min(t1, lo + step_h) - std::max(t0, lo);
            if (overlap > 0.0) v[s] += power * overlap / step_h;
        }
    }
};

TimeSeries make_series(const SyntheticSpec& spec, std::vector<double> values, Unit unit) {
    TimeSeries s;
    s.start = spec.start;
    s.interval = spec.interval;
    s.values = std::move(values);
    s.unit = unit;
    return s;
}

std::string asset_name(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s-%04zu", prefix, i + 1);
    return buf;
}

void round_all(std::vector<double>& v, double step) {
    for (auto& x : v) x = round_to(x, step);
}

AvailabilityProfile ev_asset(const SyntheticSpec& spec, const Grid& grid, std::uint64_t seed,
                             std::size_t a) {
    auto rng = rng::substream(seed, a, kEvStream);
    const double mean_arrival = Uniform(spec.ev_arrival_min_h, spec.ev_arrival_max_h)(rng);
    const EvParameters& ev = spec.ev;
    // Sessions on plug-in days carry the home energy of the days in between.
    const double session_h = ev.daily_drive_energy_kwh * ev.home_charge_fraction /
                             ev.charger_efficiency / spec.ev_plug_probability / ev.charger_power_kw;

    std::vector<double> load(grid.slots, 0.0);
    for (int day = 0; day < spec.days; ++day) {
        const double u = Uniform(0.0, 1.0)(rng);
        const double arrival = day * 24.0 + Normal(mean_arrival, spec.ev_arrival_sd_h)(rng);
        if (u < spec.ev_plug_probability) {
            grid.add_block(load, arrival, arrival + session_h, ev.charger_power_kw);
        }
    }
    round_all(load, 1e-4);
    return {ProfileKind::UnidirectionalLoad, make_series(spec, std::move(load), Unit::PowerKw),
            std::nullopt, asset_name("ev", a)};
}

std::pair<AvailabilityProfile, AvailabilityProfile> v2g_asset(const SyntheticSpec& spec,
                                                              const Grid& grid, std::uint64_t seed,
                                                              std::size_t a) {
    auto rng = rng::substream(seed, a, kV2GStream);
    const double mean_arrival = Uniform(spec.v2g_arrival_min_h, spec.v2g_arrival_max_h)(rng);
    const double mean_departure = Uniform(spec.v2g_departure_min_h, spec.v2g_departure_max_h)(rng);
    const EvParameters& ev = spec.ev;
    const double p_eff = ev.effective_charger_power_kw();
    const double e_max = ev.battery_capacity_kwh;
    const double e_min = ev.min_energy_kwh();

    std::vector<double> power(grid.slots, 0.0);
    std::vector<double> lower(grid.slots, 0.0);
    std::vector<double> upper(grid.slots, 0.0);
    double last_departure = -std::numeric_limits<double>::infinity();
    for (int day = 0; day < spec.days; ++day) {
        const double u = Uniform(0.0, 1.0)(rng);
        double arrival = day * 24.0 + Normal(mean_arrival, spec.v2g_arrival_sd_h)(rng);
        const double departure = day * 24.0 + 24.0 + Normal(mean_departure, spec.v2g_departure_sd_h)(rng);
        const double drive_days = Uniform(spec.v2g_min_drive_days, spec.v2g_max_drive_days)(rng);
        if (u >= spec.v2g_plug_probability) continue;
        arrival = std::max(arrival, last_departure);
        if (departure - arrival < grid.step_h) continue;
        last_departure = departure;

        const double e_arrival =
            e_max - std::min(ev.usable_energy_kwh(), ev.daily_drive_energy_kwh * drive_days);
        grid.add_block(power, arrival, departure, p_eff);
        const auto first = static_cast<std::size_t>(std::max(0.0, arrival / grid.step_h));
        for (std::size_t s = first; s < grid.slots; ++s) {
            const double t = grid.midpoint_h(s);
            if (t > departure) break;
            if (t < arrival) continue;
            const double up = std::min(e_max, e_arrival + p_eff * (t - arrival));
            const double lo = std::min(up, std::max(e_min, e_max - p_eff * (departure - t)));
            lower[s] += lo;
            upper[s] += up;
        }
    }
    round_all(power, 1e-4);
    round_all(lower, 1e-4);
    round_all(upper, 1e-4);
    const std::string id = asset_name("v2g", a);
    AvailabilityProfile p{ProfileKind::V2GPowerBoundary, make_series(spec, std::move(power), Unit::PowerKw),
                          std::nullopt, id};
    AvailabilityProfile e{ProfileKind::V2GEnergyBoundaries,
                          make_series(spec, std::move(lower), Unit::EnergyKwh),
                          make_series(spec, std::move(upper), Unit::EnergyKwh), id};
    return {std::move(p), std::move(e)};
}

AvailabilityProfile heat_asset(const SyntheticSpec& spec, const Grid& grid, std::uint64_t seed,
                               std::size_t a) {
    auto rng = rng::substream(seed, a, kHeatStream);
    const double shift = Uniform(-spec.hp_shift_h, spec.hp_shift_h)(rng);
    const double scale = Uniform(1.0 - spec.hp_scale_spread, 1.0 + spec.hp_scale_spread)(rng);
    DailyPeak morning = spec.hp_morning;
    DailyPeak evening = spec.hp_evening;
    morning.hour += shift;
    evening.hour += shift;

    std::vector<double> day_factor(static_cast<std::size_t>(spec.days));
    for (int d = 0; d < spec.days; ++d) {
        const double weather = std::exp(Normal(0.0, spec.hp_daily_noise_sigma)(rng));
        day_factor[static_cast<std::size_t>(d)] =
            std::max(spec.hp_seasonal_floor, 0.55 + 0.45 * seasonal(d)) * weather;
    }

    std::vector<double> load(grid.slots);
    for (std::size_t s = 0; s < grid.slots; ++s) {
        const double t = grid.midpoint_h(s);
        const double hour = std::fmod(t, 24.0);
        const auto day = static_cast<std::size_t>(t / 24.0);
        load[s] = (spec.hp_base + bump(hour, morning) + bump(hour, evening)) * day_factor[day];
    }
    // Scale so the asset's long-run mean matches the fleet average draw.
    const double mean = std::accumulate(load.begin(), load.end(), 0.0) / static_cast<double>(load.size());
    const double target = spec.heat.avg_power_kw * scale;
    for (auto& x : load) x *= target / mean;
    round_all(load, 1e-4);
    return {ProfileKind::UnidirectionalLoad, make_series(spec, std::move(load), Unit::PowerKw),
            std::nullopt, asset_name("hp", a)};
}

}  // namespace

TimeSeries generate_price(const SyntheticSpec& spec, std::uint64_t seed) {
    const Grid grid(spec);
    auto rng = rng::substream(seed, 0, kPriceStream);
    Normal noise(0.0, spec.price_noise_sigma);
    std::vector<double> price(grid.slots);
    for (std::size_t s = 0; s < grid.slots; ++s) {
        const double t = grid.midpoint_h(s);
        const double hour = std::fmod(t, 24.0);
        const int day = static_cast<int>(t / 24.0);
        double shape = 1.0;
        for (const auto& p : spec.price_peaks) shape += bump(hour, p);
        price[s] = (1.0 + spec.price_seasonal_amplitude * seasonal(day)) * shape * std::exp(noise(rng));
    }
    const double mean = std::accumulate(price.begin(), price.end(), 0.0) / static_cast<double>(price.size());
    for (auto& p : price) p = round_to(p * spec.mean_price_per_kwh / mean, 1e-6);
    return make_series(spec, std::move(price), Unit::PricePerKwh);
}

SyntheticBundle generate_synthetic_profiles(const SyntheticSpec& spec, std::uint64_t seed) {
    const Grid grid(spec);
    SyntheticBundle b;
    b.price = generate_price(spec, seed);
    for (std::size_t a = 0; a < spec.assets; ++a) {
        b.ev_charging.push_back(ev_asset(spec, grid, seed, a));
        b.heat_pump.push_back(heat_asset(spec, grid, seed, a));
        auto [power, energy] = v2g_asset(spec, grid, seed, a);
        b.v2g_power.push_back(std::move(power));
        b.v2g_energy.push_back(std::move(energy));
    }
    return b;
}

}  // namespace lcodr::synth
