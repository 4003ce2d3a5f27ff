#include "lcodr/valuefactor.hpp"

#include <algorithm>
#include <numeric>

#include "lcodr/errors.hpp"
#include "lcodr/random.hpp"

namespace lcodr::vf {

namespace {

using Kind = ValueFactorError::Kind;

constexpr std::uint64_t kSubsampleStream = 0x5646'5355'4253ULL;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

Aligned align(const TimeSeries& price, const TimeSeries& availability) {
    if (price.interval.count() <= 0 || availability.interval.count() <= 0) {
        throw ValueFactorError(Kind::IncompatibleIntervals, "series interval must be positive");
    }
    const bool price_coarse = price.interval >= availability.interval;
    const TimeSeries& coarse = price_coarse ? price : availability;
    const TimeSeries& fine = price_coarse ? availability : price;

    const std::int64_t c = coarse.interval.count();
    const std::int64_t f = fine.interval.count();
    if (c % f != 0) {
        throw ValueFactorError(Kind::IncompatibleIntervals,
                               "intervals " + std::to_string(c) + " s and " + std::to_string(f) +
                                   " s are not integer multiples");
    }
    const std::int64_t cs = coarse.start.time_since_epoch().count();
    const std::int64_t fs = fine.start.time_since_epoch().count();
    if ((cs - fs) % f != 0) {
        throw ValueFactorError(Kind::IncompatibleIntervals, "series grids are out of phase");
    }
    const auto ratio = static_cast<std::size_t>(c / f);
    const auto nc = static_cast<std::int64_t>(coarse.size());
    const auto nf = static_cast<std::int64_t>(fine.size());

    const std::int64_t first = std::max<std::int64_t>(0, ceil_div(fs - cs, c));
    const std::int64_t last = std::min<std::int64_t>(nc, floor_div(fs + nf * f - cs, c));
    if (last <= first) throw ValueFactorError(Kind::NoOverlap, "price and profile do not overlap");

    const auto count = static_cast<std::size_t>(last - first);
    const auto fine_head = static_cast<std::size_t>((cs + first * c - fs) / f);

    TimeSeries coarse_out = coarse;
    coarse_out.start = coarse.time_at(static_cast<std::size_t>(first));
    coarse_out.values.assign(coarse.values.begin() + first, coarse.values.begin() + last);

    TimeSeries fine_out = fine;
    fine_out.start = coarse_out.start;
    fine_out.interval = coarse.interval;
    fine_out.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto begin = fine.values.begin() + static_cast<std::ptrdiff_t>(fine_head + i * ratio);
        const double sum = std::accumulate(begin, begin + static_cast<std::ptrdiff_t>(ratio), 0.0);
        fine_out.values[i] = ratio == 1 ? sum : sum / static_cast<double>(ratio);
    }

    AlignmentReport report;
    report.interval = coarse.interval;
    const std::size_t coarse_head = static_cast<std::size_t>(first);
    const std::size_t coarse_tail = static_cast<std::size_t>(nc - last);
    const std::size_t fine_tail = fine.size() - fine_head - count * ratio;
    if (price_coarse) {
        report.price_dropped_head = coarse_head;
        report.price_dropped_tail = coarse_tail;
        report.profile_dropped_head = fine_head;
        report.profile_dropped_tail = fine_tail;
        return {std::move(coarse_out), std::move(fine_out), report};
    }
    report.price_dropped_head = fine_head;
    report.price_dropped_tail = fine_tail;
    report.profile_dropped_head = coarse_head;
    report.profile_dropped_tail = coarse_tail;
    return {std::move(fine_out), std::move(coarse_out), report};
}

Aligned align(const TimeSeries& price, const AvailabilityProfile& profile) {
    return align(price, profile.availability());
}

double value_factor(std::span<const double> price, std::span<const double> availability) {
    if (price.size() != availability.size() || price.empty()) {
        throw ValueFactorError(Kind::LengthMismatch,
                               "price and availability must have the same non-zero length");
    }
    double weighted = 0.0;
    double price_sum = 0.0;
    double avail_sum = 0.0;
    for (std::size_t t = 0; t < price.size(); ++t) {
        weighted += price[t] * availability[t];
        price_sum += price[t];
        avail_sum += availability[t];
    }
    if (!(avail_sum > 0.0)) {
        throw ValueFactorError(Kind::ZeroAvailabilityMean, "mean availability must be > 0");
    }
    if (price_sum == 0.0) throw ValueFactorError(Kind::ZeroPriceSum, "price series sums to zero");
    return static_cast<double>(price.size()) * weighted / (avail_sum * price_sum);
}

double value_factor(const TimeSeries& price, const TimeSeries& availability) {
    const Aligned a = align(price, availability);
    return value_factor(a.price.values, a.availability.values);
}

V2GValueFactors v2g_value_factors(const TimeSeries& price, const AvailabilityProfile& power_boundary,
                                  const AvailabilityProfile& energy_boundaries) {
    return {value_factor(price, power_boundary.availability()),
            value_factor(price, energy_boundaries.availability())};
}

TimeSeries aggregate(std::span<const AvailabilityProfile> pool) {
    if (pool.empty()) throw ValueFactorError(Kind::TooFewAssets, "empty profile pool");
    TimeSeries total = pool.front().availability();
    for (std::size_t k = 1; k < pool.size(); ++k) {
        const TimeSeries a = pool[k].availability();
        if (!a.same_grid(total)) {
            throw ValueFactorError(Kind::LengthMismatch,
                                   "asset '" + pool[k].asset_id + "' is on a different time grid");
        }
        for (std::size_t i = 0; i < a.size(); ++i) total.values[i] += a.values[i];
    }
    return total;
}

SubsampleResult vf_subsample_mc(std::span<const AvailabilityProfile> pool, const TimeSeries& price,
                                const SubsampleConfig& config) {
    if (config.subset_size == 0 || config.iterations == 0) {
        throw ValueFactorError(Kind::TooFewAssets, "subset size and iterations must be >= 1");
    }
    if (pool.size() < config.subset_size) {
        throw ValueFactorError(Kind::TooFewAssets,
                               "pool has " + std::to_string(pool.size()) + " assets, subset needs " +
                                   std::to_string(config.subset_size));
    }

    // Put every asset on the common grid once.
    std::vector<std::vector<double>> assets;
    assets.reserve(pool.size());
    std::vector<double> aligned_price;
    for (const auto& p : pool) {
        Aligned a = align(price, p);
        if (assets.empty()) {
            aligned_price = std::move(a.price.values);
        } else if (a.availability.size() != aligned_price.size()) {
            throw ValueFactorError(Kind::LengthMismatch,
                                   "asset '" + p.asset_id + "' is on a different time grid");
        }
        assets.push_back(std::move(a.availability.values));
    }

    SubsampleResult out;
    out.samples.resize(config.iterations);
    std::vector<std::size_t> index(pool.size());
    std::vector<double> sum(aligned_price.size());
    for (std::size_t it = 0; it < config.iterations; ++it) {
        auto engine = rng::substream(config.seed, it, kSubsampleStream);
        std::iota(index.begin(), index.end(), 0);
        for (std::size_t k = 0; k < config.subset_size; ++k) {
            std::uniform_int_distribution<std::size_t> pick(k, index.size() - 1);
            std::swap(index[k], index[pick(engine)]);
        }
        // Sum in index order so the result does not depend on draw order.
        std::sort(index.begin(), index.begin() + static_cast<std::ptrdiff_t>(config.subset_size));
        std::fill(sum.begin(), sum.end(), 0.0);
        for (std::size_t k = 0; k < config.subset_size; ++k) {
            const auto& a = assets[index[k]];
            for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += a[t];
        }
        out.samples[it] = value_factor(aligned_price, sum);
    }
    out.summary = summarize(out.samples);
    return out;
}

}  // namespace lcodr::vf
