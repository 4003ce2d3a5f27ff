#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lcodr/timeseries.hpp"

/// CSV loaders and writers for price series, availability profiles and the
/// LCOS reference table. Row numbers in errors are 1-based file lines.
namespace lcodr::data {

/// `timestamp,value`
TimeSeries load_timeseries_csv(const std::filesystem::path& path, Unit unit);

/// `timestamp,value`, or `timestamp,lower,upper` for energy boundaries.
AvailabilityProfile load_profile_csv(const std::filesystem::path& path, ProfileKind kind);

/// Long format with an `asset_id` column. Every asset must cover the same
/// grid. Assets are returned in order of first appearance.
std::vector<AvailabilityProfile> load_profile_pool_csv(const std::filesystem::path& path,
                                                       ProfileKind kind);

/// Either shape above, told apart by the presence of an `asset_id` column.
std::vector<AvailabilityProfile> load_profiles_csv(const std::filesystem::path& path, ProfileKind kind);

/// Writes the CSV shapes the loaders read back. A non-empty `note` becomes a
/// leading `#` comment line.
void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series,
                          std::string_view note = {});
void write_profile_csv(const std::filesystem::path& path, const AvailabilityProfile& profile,
                       std::string_view note = {});
void write_profile_pool_csv(const std::filesystem::path& path,
                            const std::vector<AvailabilityProfile>& pool, std::string_view note = {});

struct LcosEntry {
    std::string application;
    std::string technology;
    double usd_per_mwh = 0.0;
};

/// `application,technology,lcos_usd_per_mwh`
std::vector<LcosEntry> load_lcos_csv(const std::filesystem::path& path);

/// Entries for one application, in file order.
std::vector<LcosEntry> lcos_for(const std::vector<LcosEntry>& table, const std::string& application);

}  // namespace lcodr::data
