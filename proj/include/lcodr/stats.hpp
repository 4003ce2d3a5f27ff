#pragma once

#include <span>

namespace lcodr {

struct Summary {
    double mean = 0.0;
    double median = 0.0;
    double p5 = 0.0;
    double p95 = 0.0;

    bool operator==(const Summary&) const = default;
};

/// Percentile by linear interpolation between order statistics, q in [0, 1].
/// `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double q);

/// Requires a non-empty input.
Summary summarize(std::span<const double> values);

}  // namespace lcodr
