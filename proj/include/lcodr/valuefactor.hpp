#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lcodr/stats.hpp"
#include "lcodr/timeseries.hpp"

namespace lcodr::vf {

/// Samples of each input left outside the common grid.
struct AlignmentReport {
    std::chrono::seconds interval{0};
    std::size_t price_dropped_head = 0;
    std::size_t price_dropped_tail = 0;
    std::size_t profile_dropped_head = 0;
    std::size_t profile_dropped_tail = 0;
};

struct Aligned {
    TimeSeries price;
    TimeSeries availability;
    AlignmentReport report;
};

/// Brings both series onto the coarser of the two grids. Finer samples are
/// averaged within each coarse bucket; partial buckets are dropped.
/// Throws NoOverlap, or IncompatibleIntervals when the intervals or phases
/// are not integer multiples of each other.
Aligned align(const TimeSeries& price, const TimeSeries& availability);
Aligned align(const TimeSeries& price, const AvailabilityProfile& profile);

/// n * sum(p*a) / (sum(a) * sum(p)). Throws LengthMismatch, ZeroAvailabilityMean
/// or ZeroPriceSum.
double value_factor(std::span<const double> price, std::span<const double> availability);
/// Aligns first.
double value_factor(const TimeSeries& price, const TimeSeries& availability);

struct V2GValueFactors {
    double power = 1.0;
    double energy = 1.0;
};

/// Power boundary as is; energy on the width of the band (upper - lower).
V2GValueFactors v2g_value_factors(const TimeSeries& price, const AvailabilityProfile& power_boundary,
                                  const AvailabilityProfile& energy_boundaries);

/// Sums the availability of every profile in the pool. All must share a grid.
TimeSeries aggregate(std::span<const AvailabilityProfile> pool);

struct SubsampleConfig {
    std::size_t subset_size = 50;
    std::size_t iterations = 1000;
    std::uint64_t seed = 1;
};

struct SubsampleResult {
    std::vector<double> samples;  ///< one value factor per iteration
    Summary summary;
};

/// Draws `subset_size` assets without replacement per iteration, sums them
/// and evaluates the value factor. Iteration i uses its own substream, so the
/// sample list depends only on (pool, price, config).
SubsampleResult vf_subsample_mc(std::span<const AvailabilityProfile> pool, const TimeSeries& price,
                                const SubsampleConfig& config);

}  // namespace lcodr::vf
