#include "lcodr/timeseries.hpp"

#include <cstdio>

#include "lcodr/errors.hpp"

namespace lcodr {

namespace {

bool read_digits(std::string_view s, std::size_t pos, std::size_t count, int& out) noexcept {
    if (pos + count > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

}  // namespace

std::string_view to_string(Unit unit) noexcept {
    switch (unit) {
        case Unit::PricePerKwh: return "usd_per_kwh";
        case Unit::PowerKw: return "kw";
        case Unit::EnergyKwh: return "kwh";
    }
    return "?";
}

std::string_view to_string(ProfileKind kind) noexcept {
    switch (kind) {
        case ProfileKind::UnidirectionalLoad: return "unidirectional_load";
        case ProfileKind::V2GPowerBoundary: return "v2g_power_boundary";
        case ProfileKind::V2GEnergyBoundaries: return "v2g_energy_boundaries";
    }
    return "?";
}

TimeSeries AvailabilityProfile::availability() const {
    if (kind != ProfileKind::V2GEnergyBoundaries) return series;
    if (!upper || !upper->same_grid(series)) {
        throw DataError(DataError::Kind::Inconsistent,
                        "energy boundary profile '" + asset_id + "' needs matching lower and upper series");
    }
    TimeSeries band = series;
    for (std::size_t i = 0; i < band.values.size(); ++i) band.values[i] = upper->values[i] - series.values[i];
    return band;
}

std::optional<Timestamp> parse_timestamp(std::string_view s) noexcept {
    // YYYY-MM-DDTHH:MM:SS
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    if (s.size() < 19) return std::nullopt;
    if (!read_digits(s, 0, 4, y) || s[4] != '-' || !read_digits(s, 5, 2, mo) || s[7] != '-' ||
        !read_digits(s, 8, 2, d) || (s[10] != 'T' && s[10] != ' ') || !read_digits(s, 11, 2, h) ||
        s[13] != ':' || !read_digits(s, 14, 2, mi) || s[16] != ':' || !read_digits(s, 17, 2, sec)) {
        return std::nullopt;
    }
    const std::string_view zone = s.substr(19);
    if (!(zone.empty() || zone == "Z" || zone == "+00:00")) return std::nullopt;
    if (h > 23 || mi > 59 || sec > 59) return std::nullopt;

    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec};
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto days = floor<std::chrono::days>(t);
    const year_month_day ymd{days};
    const hh_mm_ss hms{t - days};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

}  // namespace lcodr
