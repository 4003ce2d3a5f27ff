#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lcodr {

using Timestamp = std::chrono::sys_seconds;

enum class Unit : std::uint8_t { PricePerKwh, PowerKw, EnergyKwh };
std::string_view to_string(Unit unit) noexcept;

/// Regularly spaced series. Sample i is stamped start + i * interval.
struct TimeSeries {
    Timestamp start{};
    std::chrono::seconds interval{1800};
    std::vector<double> values;
    Unit unit = Unit::PowerKw;

    std::size_t size() const noexcept { return values.size(); }
    Timestamp time_at(std::size_t i) const noexcept {
        return start + interval * static_cast<std::int64_t>(i);
    }
    /// One interval past the last sample.
    Timestamp end() const noexcept { return time_at(values.size()); }
    bool same_grid(const TimeSeries& other) const noexcept {
        return start == other.start && interval == other.interval && size() == other.size();
    }

    bool operator==(const TimeSeries&) const = default;
};

enum class ProfileKind : std::uint8_t {
    UnidirectionalLoad,   ///< uncontrolled consumption that can be shifted
    V2GPowerBoundary,     ///< power a plugged-in fleet could export
    V2GEnergyBoundaries,  ///< lower and upper stored-energy bounds
};
std::string_view to_string(ProfileKind kind) noexcept;

struct AvailabilityProfile {
    ProfileKind kind = ProfileKind::UnidirectionalLoad;
    TimeSeries series;                ///< load, power boundary, or lower energy bound
    std::optional<TimeSeries> upper;  ///< upper energy bound
    std::string asset_id;

    /// The series a value factor is computed on: the profile itself, or the
    /// width of the energy band.
    TimeSeries availability() const;
};

/// Accepts `YYYY-MM-DDTHH:MM:SS` with an optional `Z` or `+00:00` suffix; a
/// space may replace the `T`. Returns nullopt for anything else.
std::optional<Timestamp> parse_timestamp(std::string_view text) noexcept;
std::string format_timestamp(Timestamp t);

}  // namespace lcodr
