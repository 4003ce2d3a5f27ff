#include "lcodr/data.hpp"

#include <fstream>
#include <map>
#include <set>

#include "lcodr/errors.hpp"
#include "lcodr/format.hpp"

namespace lcodr::data {

namespace {

using Kind = DataError::Kind;

struct CsvRow {
    std::size_t line = 0;
    std::vector<std::string> fields;
};

struct CsvTable {
    std::string origin;
    std::size_t header_line = 0;
    std::vector<std::string> header;
    std::vector<CsvRow> rows;

    bool has_column(std::string_view name) const {
        for (const auto& h : header) {
            if (h == name) return true;
        }
        return false;
    }

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw DataError(Kind::MissingColumn,
                        origin + ": missing column '" + std::string(name) + "'", header_line);
    }
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Splits one line; double quotes may wrap a field and "" escapes a quote.
std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(field));
            field.clear();
        } else {
            field += c;
        }
    }
    out.push_back(trim(field));
    return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(Kind::Io, "cannot open '" + path.string() + "'");
    CsvTable t;
    t.origin = path.string();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto fields = split_line(body);
        if (t.header.empty()) {
            t.header = std::move(fields);
            t.header_line = lineno;
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw DataError(Kind::MissingColumn,
                            t.origin + ": expected " + std::to_string(t.header.size()) +
                                " fields, found " + std::to_string(fields.size()),
                            lineno);
        }
        t.rows.push_back({lineno, std::move(fields)});
    }
    if (t.header.empty()) throw DataError(Kind::MissingColumn, t.origin + ": no header row");
    return t;
}

double number_at(const CsvTable& t, const CsvRow& row, std::size_t col) {
    const auto v = parse_number(row.fields[col]);
    if (!v) {
        throw DataError(Kind::NonNumericValue,
                        t.origin + ": column '" + t.header[col] + "' is not a number: '" +
                            row.fields[col] + "'",
                        row.line);
    }
    return *v;
}

/// Builds regular series from `rows`, one per value column.
std::vector<TimeSeries> build_series(const CsvTable& t, const std::vector<const CsvRow*>& rows,
                                     std::size_t ts_col, const std::vector<std::size_t>& value_cols,
                                     Unit unit) {
    if (rows.size() < 2) {
        const std::size_t line = rows.empty() ? t.header_line : rows.front()->line;
        throw DataError(Kind::TooShort, t.origin + ": a series needs at least 2 rows", line);
    }
    std::vector<TimeSeries> out(value_cols.size());
    Timestamp prev{};
    std::chrono::seconds step{0};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const CsvRow& row = *rows[i];
        const auto ts = parse_timestamp(row.fields[ts_col]);
        if (!ts) {
            throw DataError(Kind::BadTimestamp,
                            t.origin + ": unreadable timestamp '" + row.fields[ts_col] + "'", row.line);
        }
        if (i > 0) {
            if (*ts <= prev) {
                throw DataError(Kind::NonMonotonicTimestamps,
                                t.origin + ": timestamps must be strictly increasing", row.line);
            }
            const auto gap = *ts - prev;
            if (i == 1) {
                step = gap;
            } else if (gap != step) {
                throw DataError(Kind::IrregularSpacing,
                                t.origin + ": expected a " + std::to_string(step.count()) +
                                    " s step, found " + std::to_string(gap.count()) + " s",
                                row.line);
            }
        }
        prev = *ts;
        for (std::size_t k = 0; k < value_cols.size(); ++k) {
            out[k].values.push_back(number_at(t, row, value_cols[k]));
        }
    }
    const auto start = parse_timestamp(rows.front()->fields[ts_col]).value();
    for (auto& s : out) {
        s.start = start;
        s.interval = step;
        s.unit = unit;
    }
    return out;
}

void check_profile_values(const CsvTable& t, const std::vector<const CsvRow*>& rows,
                          const AvailabilityProfile& p) {
    for (std::size_t i = 0; i < p.series.size(); ++i) {
        if (p.kind == ProfileKind::V2GEnergyBoundaries) {
            if (p.upper->values[i] < p.series.values[i]) {
                throw DataError(Kind::Inconsistent, t.origin + ": upper bound below lower bound",
                                rows[i]->line);
            }
        } else if (p.series.values[i] < 0.0) {
            throw DataError(Kind::Inconsistent, t.origin + ": availability must be >= 0",
                            rows[i]->line);
        }
    }
}

AvailabilityProfile profile_from_rows(const CsvTable& t, const std::vector<const CsvRow*>& rows,
                                      ProfileKind kind) {
    const std::size_t ts = t.column("timestamp");
    AvailabilityProfile p;
    p.kind = kind;
    if (kind == ProfileKind::V2GEnergyBoundaries) {
        auto s = build_series(t, rows, ts, {t.column("lower"), t.column("upper")}, Unit::EnergyKwh);
        p.series = std::move(s[0]);
        p.upper = std::move(s[1]);
    } else {
        p.series = std::move(build_series(t, rows, ts, {t.column("value")}, Unit::PowerKw)[0]);
    }
    check_profile_values(t, rows, p);
    return p;
}

std::vector<const CsvRow*> all_rows(const CsvTable& t) {
    std::vector<const CsvRow*> rows;
    rows.reserve(t.rows.size());
    for (const auto& r : t.rows) rows.push_back(&r);
    return rows;
}

std::vector<AvailabilityProfile> pool_from_table(const CsvTable& t, ProfileKind kind) {
    const std::size_t id_col = t.column("asset_id");

    std::vector<std::string> order;
    std::map<std::string, std::vector<const CsvRow*>> groups;
    for (const auto& row : t.rows) {
        const std::string& id = row.fields[id_col];
        if (id.empty()) throw DataError(Kind::MissingColumn, t.origin + ": empty asset_id", row.line);
        auto [it, inserted] = groups.try_emplace(id);
        if (inserted) order.push_back(id);
        it->second.push_back(&row);
    }

    std::vector<AvailabilityProfile> pool;
    pool.reserve(order.size());
    for (const auto& id : order) {
        const auto& rows = groups.at(id);
        AvailabilityProfile p = profile_from_rows(t, rows, kind);
        p.asset_id = id;
        if (!pool.empty() && !pool.front().series.same_grid(p.series)) {
            throw DataError(Kind::Inconsistent,
                            t.origin + ": asset '" + id + "' does not share the time grid of '" +
                                pool.front().asset_id + "'",
                            rows.front()->line);
        }
        pool.push_back(std::move(p));
    }
    if (pool.empty()) throw DataError(Kind::TooShort, t.origin + ": no assets");
    return pool;
}

std::ofstream open_out(const std::filesystem::path& path, std::string_view note) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(Kind::Io, "cannot write '" + path.string() + "'");
    if (!note.empty()) out << "# " << note << '\n';
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw DataError(Kind::Io, "write failed for '" + path.string() + "'");
}

void write_rows(std::ostream& out, const AvailabilityProfile& p, const std::string* asset) {
    for (std::size_t i = 0; i < p.series.size(); ++i) {
        out << format_timestamp(p.series.time_at(i));
        if (asset) out << ',' << *asset;
        out << ',' << format_number(p.series.values[i]);
        if (p.upper) out << ',' << format_number(p.upper->values[i]);
        out << '\n';
    }
}

std::string value_header(ProfileKind kind) {
    return kind == ProfileKind::V2GEnergyBoundaries ? "lower,upper" : "value";
}

}  // namespace

TimeSeries load_timeseries_csv(const std::filesystem::path& path, Unit unit) {
    const CsvTable t = read_csv(path);
    return std::move(build_series(t, all_rows(t), t.column("timestamp"), {t.column("value")}, unit)[0]);
}

AvailabilityProfile load_profile_csv(const std::filesystem::path& path, ProfileKind kind) {
    const CsvTable t = read_csv(path);
    AvailabilityProfile p = profile_from_rows(t, all_rows(t), kind);
    p.asset_id = path.stem().string();
    return p;
}

std::vector<AvailabilityProfile> load_profile_pool_csv(const std::filesystem::path& path,
                                                       ProfileKind kind) {
    return pool_from_table(read_csv(path), kind);
}

std::vector<AvailabilityProfile> load_profiles_csv(const std::filesystem::path& path, ProfileKind kind) {
    const CsvTable t = read_csv(path);
    if (t.has_column("asset_id")) return pool_from_table(t, kind);
    AvailabilityProfile p = profile_from_rows(t, all_rows(t), kind);
    p.asset_id = path.stem().string();
    return {std::move(p)};
}

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeries& series,
                          std::string_view note) {
    AvailabilityProfile p;
    p.series = series;
    write_profile_csv(path, p, note);
}

void write_profile_csv(const std::filesystem::path& path, const AvailabilityProfile& profile,
                       std::string_view note) {
    auto out = open_out(path, note);
    out << "timestamp," << value_header(profile.kind) << '\n';
    write_rows(out, profile, nullptr);
    finish(out, path);
}

void write_profile_pool_csv(const std::filesystem::path& path,
                            const std::vector<AvailabilityProfile>& pool, std::string_view note) {
    auto out = open_out(path, note);
    const ProfileKind kind = pool.empty() ? ProfileKind::UnidirectionalLoad : pool.front().kind;
    out << "timestamp,asset_id," << value_header(kind) << '\n';
    for (const auto& p : pool) write_rows(out, p, &p.asset_id);
    finish(out, path);
}

std::vector<LcosEntry> load_lcos_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    const std::size_t app = t.column("application");
    const std::size_t tech = t.column("technology");
    const std::size_t val = t.column("lcos_usd_per_mwh");

    std::vector<LcosEntry> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& row : t.rows) {
        LcosEntry e{row.fields[app], row.fields[tech], number_at(t, row, val)};
        if (e.application.empty() || e.technology.empty()) {
            throw DataError(Kind::MissingColumn, t.origin + ": empty application or technology", row.line);
        }
        if (!(e.usd_per_mwh > 0.0)) {
            throw DataError(Kind::Inconsistent, t.origin + ": LCOS must be > 0", row.line);
        }
        if (!seen.emplace(e.application, e.technology).second) {
            throw DataError(Kind::Inconsistent,
                            t.origin + ": duplicate entry for " + e.application + " / " + e.technology,
                            row.line);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<LcosEntry> lcos_for(const std::vector<LcosEntry>& table, const std::string& application) {
    std::vector<LcosEntry> out;
    for (const auto& e : table) {
        if (e.application == application) out.push_back(e);
    }
    return out;
}

}  // namespace lcodr::data
