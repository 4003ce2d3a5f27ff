#include "lcodr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace lcodr {

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Summary summarize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("summary of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    Summary s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.median = percentile_sorted(sorted, 0.5);
    s.p5 = percentile_sorted(sorted, 0.05);
    s.p95 = percentile_sorted(sorted, 0.95);
    return s;
}

}  // namespace lcodr
