#include "lcodr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "lcodr/costing.hpp"
#include "lcodr/data.hpp"
#include "lcodr/errors.hpp"
#include "lcodr/format.hpp"
#include "lcodr/model.hpp"
#include "lcodr/report.hpp"
#include "lcodr/synthetic.hpp"
#include "lcodr/uncertainty.hpp"
#include "lcodr/valuefactor.hpp"

namespace lcodr::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using report::cell;
using report::CsvTable;

class UsageError : public Error {
public:
    using Error::Error;
};

constexpr std::string_view kPriceFile = "price.csv";
constexpr std::string_view kLcosFile = "lcos_reference.csv";
constexpr std::string_view kDefaultConfigFile = "defaults.json";
constexpr std::string_view kManifestFile = "manifest.json";
constexpr std::string_view kAllApplications = "All applications";

constexpr std::uint64_t kDefaultVfSeed = 1;
constexpr std::uint64_t kDefaultSynthSeed = 1;

struct ProfileFile {
    std::string_view file;
    std::string_view name;  ///< value-factor key
    ProfileKind kind;
};

constexpr std::array<ProfileFile, 4> kProfileFiles{{
    {"ev_charging.csv", "smart_charging", ProfileKind::UnidirectionalLoad},
    {"heat_pump.csv", "heat_pump", ProfileKind::UnidirectionalLoad},
    {"v2g_power.csv", "v2g_power", ProfileKind::V2GPowerBoundary},
    {"v2g_energy.csv", "v2g_energy", ProfileKind::V2GEnergyBoundaries},
}};

double& vf_slot(ValueFactors& v, std::size_t k) {
    switch (k) {
        case 0: return v.smart_charging;
        case 1: return v.heat_pump;
        case 2: return v.v2g_power;
        default: return v.v2g_energy;
    }
}

std::optional<double>& override_slot(ValueFactorOverrides& v, std::size_t k) {
    switch (k) {
        case 0: return v.smart_charging;
        case 1: return v.heat_pump;
        case 2: return v.v2g_power;
        default: return v.v2g_energy;
    }
}

struct Options {
    std::string config;
    std::string out_dir = "lcodr_out";
    std::string data_dir;
    std::string price;
    std::string lcos;
    std::vector<std::string> applications;
    std::vector<std::string> schemes;
    std::vector<std::string> assume;
    std::vector<std::string> set;
    bool compute_vf = false;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t samples = 1000;
    double sigma = 0.33;
    bool sigma_given = false;
    double sigma_vf = 0.10;
    bool sigma_vf_given = false;
    std::string lcos_sampling = "point";
    bool emit_samples = false;
    unsigned workers = 0;
    std::size_t subsample = 0;
    std::size_t iterations = 1000;
    std::string emit_config;
    int days = 365;
    std::size_t assets = 200;
    bool pool = false;
};

std::pair<std::string, std::string> split_assignment(const std::string& text, std::string_view flag) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw UsageError(std::string(flag) + " expects KEY=VALUE, got '" + text + "'");
    }
    return {text.substr(0, eq), text.substr(eq + 1)};
}

void apply_setting(ParameterSet& p, const std::string& path, const std::string& value) {
    const auto number = parse_number(value);
    if (!number) throw ValidationError(path, "'" + value + "' is not a number");
    if (path == "economics.lifetime_years") {
        if (*number != std::floor(*number)) throw ValidationError(path, "must be a whole number of years");
        p.econ.lifetime_years = static_cast<int>(*number);
        return;
    }
    for (const auto& f : numeric_fields()) {
        if (f.path() == path) {
            f.ref(p) = *number;
            return;
        }
    }
    throw ValidationError(path, "unknown parameter");
}

struct LoadedConfig {
    Config config;
    std::string source;
    std::string text;  ///< canonical serialisation, after overrides
};

LoadedConfig load_run_config(const Options& o) {
    LoadedConfig c;
    const fs::path bundled = bundled_data_dir() / kDefaultConfigFile;
    if (!o.config.empty()) {
        c.config = load_config(o.config);
        c.source = o.config;
    } else if (fs::exists(bundled)) {
        c.config = load_config(bundled);
        c.source = bundled.string();
    } else {
        c.config = Config{default_parameters(), default_applications()};
        c.source = "built-in";
    }
    for (const auto& a : o.assume) {
        const auto [key, value] = split_assignment(a, "--assume");
        apply_assumption(c.config.params.assumptions, key, value);
    }
    for (const auto& s : o.set) {
        const auto [path, value] = split_assignment(s, "--set");
        apply_setting(c.config.params, path, value);
    }
    validate(c.config.params);
    c.text = serialize_config(c.config);
    return c;
}

std::vector<ApplicationSpec> select_applications(const Config& c, const Options& o) {
    for (const auto& name : o.applications) {
        if (!find_application(c.applications, name)) throw UsageError("unknown application '" + name + "'");
    }
    std::vector<ApplicationSpec> out;
    for (const auto& app : c.applications) {
        if (o.applications.empty() ||
            std::find(o.applications.begin(), o.applications.end(), app.name) != o.applications.end()) {
            out.push_back(app);
        }
    }
    return out;
}

std::vector<Scheme> select_schemes(const Options& o) {
    SchemeSet chosen;
    for (const auto& name : o.schemes) {
        const auto s = parse_scheme(name);
        if (!s) throw UsageError("unknown scheme '" + name + "'");
        chosen.insert(*s);
    }
    return o.schemes.empty() ? std::vector<Scheme>(kAllSchemes.begin(), kAllSchemes.end())
                             : chosen.to_vector();
}

struct InputFile {
    std::string label;
    fs::path path;
    std::string sha256;
};

struct SeriesInputs {
    TimeSeries price;
    std::array<std::vector<AvailabilityProfile>, kProfileFiles.size()> pools;
    std::vector<InputFile> files;
};

SeriesInputs load_series(const Options& o) {
    SeriesInputs in;
    const fs::path dir = o.data_dir;
    const fs::path price = o.price.empty() ? dir / kPriceFile : fs::path(o.price);
    in.price = data::load_timeseries_csv(price, Unit::PricePerKwh);
    in.files.push_back({"price", price, report::sha256_file(price)});
    for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
        const fs::path path = dir / kProfileFiles[k].file;
        in.pools[k] = data::load_profiles_csv(path, kProfileFiles[k].kind);
        in.files.push_back({std::string(kProfileFiles[k].name), path, report::sha256_file(path)});
    }
    return in;
}

struct ComputedVf {
    ValueFactors values;
    std::array<vf::AlignmentReport, kProfileFiles.size()> reports;
};

ComputedVf compute_value_factors(const SeriesInputs& in) {
    ComputedVf out;
    for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
        const TimeSeries total = vf::aggregate(in.pools[k]);
        const vf::Aligned a = vf::align(in.price, total);
        vf_slot(out.values, k) = vf::value_factor(a.price.values, a.availability.values);
        out.reports[k] = a.report;
    }
    return out;
}

struct ResolvedVf {
    ValueFactors values;
    std::array<std::string, kProfileFiles.size()> sources;
    std::optional<ComputedVf> computed;
    std::vector<InputFile> files;
};

ResolvedVf resolve_value_factors(const Options& o, const ParameterSet& params) {
    ResolvedVf r;
    if (o.compute_vf) {
        SeriesInputs in = load_series(o);
        r.computed = compute_value_factors(in);
        r.values = r.computed->values;
        r.sources.fill("computed");
        r.files = std::move(in.files);
        return r;
    }
    r.values = ValueFactors{}.with(params.value_factors);
    ValueFactorOverrides overrides = params.value_factors;
    for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
        r.sources[k] = override_slot(overrides, k) ? "config" : "unity";
    }
    return r;
}

json alignment_json(const vf::AlignmentReport& r) {
    return {{"interval_s", r.interval.count()},
            {"price_dropped_head", r.price_dropped_head},
            {"price_dropped_tail", r.price_dropped_tail},
            {"profile_dropped_head", r.profile_dropped_head},
            {"profile_dropped_tail", r.profile_dropped_tail}};
}

json value_factor_json(const ResolvedVf& r) {
    json j = json::object();
    ValueFactors v = r.values;
    for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
        json entry = {{"value", vf_slot(v, k)}, {"source", r.sources[k]}};
        if (r.computed) entry["alignment"] = alignment_json(r.computed->reports[k]);
        j[std::string(kProfileFiles[k].name)] = std::move(entry);
    }
    return j;
}

json inputs_json(const std::vector<InputFile>& files) {
    json j = json::array();
    for (const auto& f : files) j.push_back({{"label", f.label}, {"path", f.path.string()}, {"sha256", f.sha256}});
    return j;
}

/// Hashes only content, never paths, so moving inputs keeps the run id.
std::string make_run_id(std::string_view command, const std::string& config_text,
                        const std::vector<InputFile>& files, const json& settings) {
    std::string text = std::string(command) + '\n' + config_text + '\n';
    for (const auto& f : files) text += f.label + '=' + f.sha256 + '\n';
    text += settings.dump();
    return report::sha256_hex(text).substr(0, 16);
}

json assumptions_json(const ParameterSet& p) {
    json a = json::object();
    for (const auto& [key, value] : describe(p.assumptions)) a[key] = value;
    a["discount_rate"] = p.econ.discount_rate;
    a["discount_rate_is_default"] = p.econ.discount_rate == default_parameters().econ.discount_rate;
    a["smart_charging_shiftable_power"] = "home charging energy averaged over 24 h";

    constexpr double kWorkedExampleBaseHours = 10.0;
    constexpr double kExamplePluginTime = 15.0;
    const EvParameters& ev = p.ev;
    const auto reward = [&](double base_hours) {
        return costing::ev_monthly_reward(ev.sc_reward_base, ev.sc_reward_per_hour, kExamplePluginTime,
                                          base_hours, p.econ.reward_floor);
    };
    a["reward_base_hours"] = {
        {"configured_h", ev.base_plugin_time_h},
        {"worked_example_h", kWorkedExampleBaseHours},
        {"smart_charging_reward_at_15h", reward(ev.base_plugin_time_h)},
        {"smart_charging_reward_at_15h_worked_example", reward(kWorkedExampleBaseHours)},
        {"discrepancy", ev.base_plugin_time_h != kWorkedExampleBaseHours},
    };
    return a;
}

std::string utc_now() {
    return format_timestamp(std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

/// Writes CSVs into the output directory and remembers their hashes for the
/// manifest.
class OutputDir {
public:
    explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw DataError(DataError::Kind::Io, "cannot create '" + dir_.string() + "': " + ec.message());
    }

    void add(const std::string& name, const CsvTable& table) {
        table.write(dir_ / name);
        hashes_[name] = report::sha256_hex(table.text());
    }

    void write_manifest(json manifest) const {
        manifest["outputs"] = hashes_;
        const fs::path path = dir_ / kManifestFile;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << manifest.dump(2) << '\n';
        out.flush();
        if (!out) throw DataError(DataError::Kind::Io, "cannot write '" + path.string() + "'");
    }

    const fs::path& path() const noexcept { return dir_; }

private:
    fs::path dir_;
    json hashes_ = json::object();
};

struct Invocation {
    std::string command;
    std::vector<std::string> argv;
    std::ostream& out;
};

json manifest_header(const Invocation& inv, const std::string& run_id) {
    return {
        {"tool", "lcodr"},
        {"version", LCODR_VERSION},
        {"output_schema_version", report::kOutputSchemaVersion},
        {"command", inv.command},
        {"argv", inv.argv},
        {"run_id", run_id},
        {"created_utc", utc_now()},
    };
}

json names_json(const std::vector<ApplicationSpec>& apps) {
    json j = json::array();
    for (const auto& a : apps) j.push_back(a.name);
    return j;
}

json names_json(const std::vector<Scheme>& schemes) {
    json j = json::array();
    for (Scheme s : schemes) j.push_back(std::string(to_string(s)));
    return j;
}

// ---- run -----------------------------------------------------------------

const std::vector<std::string> kDeterministicHeader{
    "run_id",          "scheme",           "application",        "status",
    "reason",          "binding",          "contracted_assets",  "contracted_assets_ceil",
    "available_assets", "shiftable_power_kw", "required_plugin_time_h", "power_reduction_kw",
    "tank_area_m2",    "tank_volume_m3",   "tank_mass_kg",       "monthly_reward",
    "investment",      "om_pv",            "rewards_pv",         "rebound_pv",
    "eol_pv",          "energy_pv_mwh",    "lcodr_energy",       "lcodr_power",
    "value_factor",    "lcodr_vf",
};

std::vector<std::string> deterministic_row(const std::string& run_id, const costing::PairingResult& r) {
    const sizing::SizingResult& s = r.sizing;
    const bool ok = s.feasible();
    const auto when_ok = [ok](double v) { return ok ? cell(v) : std::string(); };
    std::vector<std::string> row{
        run_id,
        std::string(to_string(r.scheme)),
        r.application,
        std::string(sizing::to_string(s.feasibility)),
        s.reason,
        std::string(to_string(s.binding)),
        when_ok(s.contracted_assets),
        ok ? cell(s.contracted_assets_ceil()) : std::string(),
        when_ok(s.available_assets),
        cell(s.shiftable_power_kw),
        cell(s.required_plugin_time_h),
        cell(s.power_reduction_kw),
        s.tank ? cell(s.tank->area_m2) : std::string(),
        s.tank ? cell(s.tank->volume_m3) : std::string(),
        s.tank ? cell(s.tank->mass_kg) : std::string(),
        cell(r.monthly_reward),
    };
    if (r.cost) {
        const auto& c = *r.cost;
        for (double v : {c.investment, c.om_pv, c.rewards_pv, c.rebound_pv, c.eol_pv, c.energy_pv_mwh,
                         c.lcodr_energy, c.lcodr_power, c.value_factor, c.lcodr_vf}) {
            row.push_back(cell(v));
        }
    } else {
        row.resize(kDeterministicHeader.size());
    }
    return row;
}

int cmd_run(const Options& o, const Invocation& inv) {
    const LoadedConfig cfg = load_run_config(o);
    const auto apps = select_applications(cfg.config, o);
    const auto schemes = select_schemes(o);
    const ResolvedVf vfs = resolve_value_factors(o, cfg.config.params);

    const json settings = {{"applications", names_json(apps)},
                           {"schemes", names_json(schemes)},
                           {"value_factors", value_factor_json(vfs)}};
    const std::string run_id = make_run_id(inv.command, cfg.text, vfs.files, settings);

    CsvTable table(kDeterministicHeader);
    std::size_t feasible = 0;
    for (Scheme scheme : schemes) {
        for (const auto& app : apps) {
            const auto r = costing::evaluate_pairing(scheme, app, cfg.config.params, vfs.values);
            feasible += r.ok() ? 1 : 0;
            table.add_row(deterministic_row(run_id, r));
        }
    }

    OutputDir out(o.out_dir);
    out.add("lcodr_deterministic.csv", table);
    json manifest = manifest_header(inv, run_id);
    manifest["config"] = {{"source", cfg.source}, {"sha256", report::sha256_hex(cfg.text)}};
    manifest["inputs"] = inputs_json(vfs.files);
    manifest["assumptions"] = assumptions_json(cfg.config.params);
    manifest["settings"] = settings;
    out.write_manifest(std::move(manifest));

    inv.out << "run " << run_id << ": " << table.rows() << " pairings (" << feasible << " feasible) -> "
            << out.path().string() << '\n';
    return 0;
}

// ---- vf ------------------------------------------------------------------

int cmd_vf(const Options& o, const Invocation& inv) {
    const SeriesInputs in = load_series(o);
    const ComputedVf computed = compute_value_factors(in);
    const std::uint64_t seed = o.seed_given ? o.seed : kDefaultVfSeed;

    json settings = {{"subsample", o.subsample}};
    if (o.subsample > 0) {
        settings["iterations"] = o.iterations;
        settings["seed"] = seed;
    }
    const std::string run_id = make_run_id(inv.command, "", in.files, settings);

    ValueFactors v = computed.values;
    CsvTable factors({"run_id", "scheme", "vf", "vf_power", "vf_energy"});
    for (Scheme s : kAllSchemes) {
        std::vector<std::string> row{run_id, std::string(to_string(s))};
        if (s == Scheme::V2G) {
            row.insert(row.end(), {"", cell(v.v2g_power), cell(v.v2g_energy)});
        } else {
            const double x = s == Scheme::SmartCharging ? v.smart_charging : v.heat_pump;
            row.insert(row.end(), {cell(x), "", ""});
        }
        factors.add_row(std::move(row));
    }

    OutputDir out(o.out_dir);
    out.add("value_factors.csv", factors);

    if (o.subsample > 0) {
        const vf::SubsampleConfig sc{o.subsample, o.iterations, seed};
        std::vector<vf::SubsampleResult> results;
        for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
            try {
                results.push_back(vf::vf_subsample_mc(in.pools[k], in.price, sc));
            } catch (const ValueFactorError& e) {
                throw ValueFactorError(e.kind(), std::string(kProfileFiles[k].file) + ": " + e.what());
            }
        }
        std::vector<std::string> header{"run_id", "iteration"};
        for (const auto& f : kProfileFiles) header.emplace_back(f.name);
        CsvTable dist(header);
        for (std::size_t it = 0; it < o.iterations; ++it) {
            std::vector<std::string> row{run_id, std::to_string(it)};
            for (const auto& r : results) row.push_back(cell(r.samples[it]));
            dist.add_row(std::move(row));
        }
        CsvTable summary({"run_id", "profile", "mean", "median", "p5", "p95"});
        for (std::size_t k = 0; k < results.size(); ++k) {
            const Summary& s = results[k].summary;
            summary.add_row({run_id, std::string(kProfileFiles[k].name), cell(s.mean), cell(s.median),
                             cell(s.p5), cell(s.p95)});
        }
        out.add("vf_distribution.csv", dist);
        out.add("vf_distribution_summary.csv", summary);
    }

    ResolvedVf resolved{computed.values, {}, computed, {}};
    resolved.sources.fill("computed");
    json manifest = manifest_header(inv, run_id);
    manifest["inputs"] = inputs_json(in.files);
    manifest["settings"] = settings;
    manifest["value_factors"] = value_factor_json(resolved);

    if (!o.emit_config.empty()) {
        LoadedConfig cfg = load_run_config(o);
        for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
            override_slot(cfg.config.params.value_factors, k) = vf_slot(v, k);
        }
        std::ofstream file(o.emit_config, std::ios::binary | std::ios::trunc);
        file << serialize_config(cfg.config);
        file.flush();
        if (!file) throw DataError(DataError::Kind::Io, "cannot write '" + o.emit_config + "'");
        manifest["emitted_config"] = o.emit_config;
    }
    out.write_manifest(std::move(manifest));

    inv.out << "vf " << run_id << ": smart_charging=" << format_number(v.smart_charging)
            << " heat_pump=" << format_number(v.heat_pump) << " v2g_power=" << format_number(v.v2g_power)
            << " v2g_energy=" << format_number(v.v2g_energy) << '\n';
    return 0;
}

// ---- mc ------------------------------------------------------------------

mc::LcosSampling parse_lcos_sampling(const std::string& text) {
    if (text == "point") return mc::LcosSampling::Point;
    if (text == "same_scheme") return mc::LcosSampling::SameScheme;
    throw UsageError("--lcos-sampling must be 'point' or 'same_scheme', got '" + text + "'");
}

std::vector<std::string> summary_cells(const mc::McDistribution& d) {
    if (!d.summary) return {"", "", "", ""};
    return {cell(d.summary->mean), cell(d.summary->median), cell(d.summary->p5), cell(d.summary->p95)};
}

using Shares = std::array<double, costing::kCostComponents>;

std::vector<std::string> share_row(const std::string& run_id, const std::string& technology,
                                   const std::string& application, const Shares& s) {
    std::vector<std::string> row{run_id, technology, application};
    for (double x : s) row.push_back(cell(x));
    return row;
}

int cmd_mc(const Options& o, const Invocation& inv) {
    const LoadedConfig cfg = load_run_config(o);
    const auto apps = select_applications(cfg.config, o);
    const auto schemes = select_schemes(o);
    const ResolvedVf vfs = resolve_value_factors(o, cfg.config.params);

    mc::McConfig mcfg;
    mcfg.samples = o.samples;
    mcfg.sigma_inputs = o.sigma_given ? o.sigma : mcfg.sigma_inputs;
    if (o.sigma_vf_given) {
        mcfg.sigma_vf = o.sigma_vf;
    } else if (o.sigma_given && o.sigma == 0.0) {
        mcfg.sigma_vf = 0.0;
    }
    if (o.seed_given) mcfg.seed = o.seed;
    mcfg.lcos_sampling = parse_lcos_sampling(o.lcos_sampling);
    mcfg.workers = o.workers;
    mcfg.validate();

    const fs::path lcos_path = o.lcos.empty() ? bundled_data_dir() / kLcosFile : fs::path(o.lcos);
    const auto table = data::load_lcos_csv(lcos_path);
    std::vector<data::LcosEntry> entries;
    for (const auto& app : apps) {
        for (auto& e : data::lcos_for(table, app.name)) entries.push_back(std::move(e));
    }
    std::vector<InputFile> files = vfs.files;
    files.push_back({"lcos", lcos_path, report::sha256_file(lcos_path)});

    const json settings = {
        {"applications", names_json(apps)},
        {"schemes", names_json(schemes)},
        {"value_factors", value_factor_json(vfs)},
        {"samples", mcfg.samples},
        {"sigma_inputs", mcfg.sigma_inputs},
        {"sigma_vf", mcfg.sigma_vf},
        {"truncation_z", mcfg.truncation_z},
        {"seed", mcfg.seed},
        {"lcos_sampling", std::string(mc::to_string(mcfg.lcos_sampling))},
        {"emit_samples", o.emit_samples},
    };
    const std::string run_id = make_run_id(inv.command, cfg.text, files, settings);

    const auto dr = mc::run_monte_carlo(schemes, apps, cfg.config.params, vfs.values, mcfg);
    const auto lcos = mc::lcos_distributions(entries, mcfg);

    CsvTable summary({"run_id", "kind", "technology", "application", "status", "samples",
                      "feasible_fraction", "mean", "median", "p5", "p95"});
    const auto add_summary = [&](std::string_view kind, const mc::McDistribution& d) {
        std::vector<std::string> row{run_id, std::string(kind), d.technology, d.application,
                                     std::string(d.status()), std::to_string(d.samples.size()),
                                     cell(d.feasible_fraction)};
        for (auto& c : summary_cells(d)) row.push_back(std::move(c));
        summary.add_row(std::move(row));
    };
    for (const auto& d : dr) add_summary("dr", d);
    for (const auto& d : lcos) add_summary("lcos", d);

    CsvTable cheapest({"run_id", "application", "technology", "probability", "samples_considered", "ties"});
    json no_feasible = json::array();
    for (const auto& app : apps) {
        std::vector<mc::McDistribution> entrants;
        for (const auto& d : dr) {
            if (d.application == app.name && d.suitable) entrants.push_back(d);
        }
        for (const auto& d : lcos) {
            if (d.application == app.name) entrants.push_back(d);
        }
        if (entrants.empty()) continue;
        try {
            const auto r = mc::cheapest_probability(app.name, entrants);
            for (std::size_t k = 0; k < r.technologies.size(); ++k) {
                cheapest.add_row({run_id, app.name, r.technologies[k], cell(r.probabilities[k]),
                                  std::to_string(r.samples_considered), std::to_string(r.ties)});
            }
        } catch (const UncertaintyError& e) {
            if (e.kind() != UncertaintyError::Kind::NoFeasibleTechnology) throw;
            no_feasible.push_back(app.name);
        }
    }

    CsvTable composition({"run_id", "technology", "application", "investment", "om", "rewards", "rebound",
                          "end_of_life"});
    for (Scheme scheme : schemes) {
        const std::string tech(to_string(scheme));
        Shares total{};
        std::size_t count = 0;
        for (const auto& d : dr) {
            if (d.scheme != scheme || !d.mean_shares) continue;
            composition.add_row(share_row(run_id, tech, d.application, *d.mean_shares));
            for (std::size_t c = 0; c < total.size(); ++c) total[c] += (*d.mean_shares)[c];
            ++count;
        }
        if (count == 0) continue;
        for (auto& x : total) x /= static_cast<double>(count);
        composition.add_row(share_row(run_id, tech, std::string(kAllApplications), total));
    }

    OutputDir out(o.out_dir);
    out.add("lcodr_mc.csv", summary);
    out.add("cheapest_probability.csv", cheapest);
    out.add("cost_composition.csv", composition);
    if (o.emit_samples) {
        CsvTable samples({"run_id", "kind", "technology", "application", "sample", "feasible", "value"});
        const auto add_samples = [&](std::string_view kind, const mc::McDistribution& d) {
            if (!d.suitable) return;
            for (std::size_t s = 0; s < d.samples.size(); ++s) {
                samples.add_row({run_id, std::string(kind), d.technology, d.application, std::to_string(s),
                                 d.feasible[s] ? "1" : "0", d.feasible[s] ? cell(d.samples[s]) : ""});
            }
        };
        for (const auto& d : dr) add_samples("dr", d);
        for (const auto& d : lcos) add_samples("lcos", d);
        out.add("lcodr_samples.csv", samples);
    }

    json manifest = manifest_header(inv, run_id);
    manifest["config"] = {{"source", cfg.source}, {"sha256", report::sha256_hex(cfg.text)}};
    manifest["inputs"] = inputs_json(files);
    manifest["assumptions"] = assumptions_json(cfg.config.params);
    manifest["settings"] = settings;
    manifest["workers"] = o.workers;
    manifest["applications_without_feasible_technology"] = no_feasible;
    out.write_manifest(std::move(manifest));

    inv.out << "mc " << run_id << ": " << mcfg.samples << " samples over " << dr.size() << " pairings and "
            << lcos.size() << " references -> " << out.path().string() << '\n';
    return 0;
}

// ---- synth ---------------------------------------------------------------

AvailabilityProfile fleet_total(const std::vector<AvailabilityProfile>& pool) {
    AvailabilityProfile total = pool.front();
    total.asset_id = "fleet";
    for (std::size_t k = 1; k < pool.size(); ++k) {
        for (std::size_t i = 0; i < total.series.size(); ++i) {
            total.series.values[i] += pool[k].series.values[i];
            if (total.upper) total.upper->values[i] += pool[k].upper->values[i];
        }
    }
    return total;
}

int cmd_synth(const Options& o, const Invocation& inv) {
    const std::uint64_t seed = o.seed_given ? o.seed : kDefaultSynthSeed;
    synth::SyntheticSpec spec;
    spec.days = o.days;
    spec.assets = o.assets;
    const synth::SyntheticBundle bundle = synth::generate_synthetic_profiles(spec, seed);

    const std::string note = "synthetic sample data from `lcodr synth` (seed " + std::to_string(seed) + ", " +
                             std::to_string(o.assets) + " assets, " + std::to_string(o.days) +
                             " days); not measured data";
    OutputDir out(o.out_dir);
    const fs::path dir = out.path();
    data::write_timeseries_csv(dir / kPriceFile, bundle.price, note);
    const std::array<const std::vector<AvailabilityProfile>*, kProfileFiles.size()> pools{
        &bundle.ev_charging, &bundle.heat_pump, &bundle.v2g_power, &bundle.v2g_energy};
    for (std::size_t k = 0; k < kProfileFiles.size(); ++k) {
        const fs::path path = dir / kProfileFiles[k].file;
        if (o.pool) {
            data::write_profile_pool_csv(path, *pools[k], note);
        } else {
            data::write_profile_csv(path, fleet_total(*pools[k]), note);
        }
    }
    inv.out << "synth: wrote " << (o.pool ? "per-asset pools" : "fleet totals") << " for " << o.assets
            << " assets over " << o.days << " days -> " << dir.string() << '\n';
    return 0;
}

// ---- dispatch ------------------------------------------------------------

void add_model_options(CLI::App* sub, Options& o) {
    sub->add_option("--config", o.config, "Config JSON (default: bundled defaults.json)");
    sub->add_option("--applications", o.applications, "Comma-separated application names")->delimiter(',');
    sub->add_option("--schemes", o.schemes, "Comma-separated scheme names")->delimiter(',');
    sub->add_option("--assume", o.assume, "Assumption toggle KEY=VALUE (repeatable)");
    sub->add_option("--set", o.set, "Parameter override section.key=VALUE (repeatable)");
    sub->add_flag("--compute-vf", o.compute_vf, "Compute value factors from the data directory");
}

void add_data_options(CLI::App* sub, Options& o) {
    sub->add_option("--data", o.data_dir, "Directory with price and profile CSVs");
    sub->add_option("--price", o.price, "Price CSV (default: <data>/price.csv)");
}

int report_error(std::ostream& err, ExitCode code, std::string_view message) {
    static constexpr std::array<std::string_view, 5> kNames{"ok", "usage", "config", "data", "internal"};
    err << "error[" << kNames[static_cast<int>(code)] << "]: " << message << '\n';
    return static_cast<int>(code);
}

}  // namespace

std::filesystem::path bundled_data_dir() { return LCODR_DATA_DIR; }

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    o.data_dir = bundled_data_dir().string();

    CLI::App app{"Levelised cost of demand response", "lcodr"};
    app.set_version_flag("--version", LCODR_VERSION);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Size and cost every scheme/application pairing");
    auto* vf_cmd = app.add_subcommand("vf", "Value factors from price and availability series");
    auto* mc_cmd = app.add_subcommand("mc", "Monte-Carlo uncertainty propagation");
    auto* synth_cmd = app.add_subcommand("synth", "Write seeded synthetic price and profile series");

    for (auto* sub : {run_cmd, vf_cmd, mc_cmd, synth_cmd}) {
        sub->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
    }
    for (auto* sub : {run_cmd, mc_cmd}) {
        add_model_options(sub, o);
        add_data_options(sub, o);
    }
    add_data_options(vf_cmd, o);
    vf_cmd->add_option("--subsample", o.subsample, "Assets per subsample (0 disables)");
    vf_cmd->add_option("--iterations", o.iterations, "Subsample iterations")->check(CLI::PositiveNumber);
    vf_cmd->add_option("--config", o.config, "Base config for --emit-config");
    vf_cmd->add_option("--emit-config", o.emit_config, "Write the config with computed value factors");

    std::vector<CLI::Option*> seed_opts;
    for (auto* sub : {vf_cmd, mc_cmd, synth_cmd}) seed_opts.push_back(sub->add_option("--seed", o.seed, "Seed"));

    mc_cmd->add_option("--samples", o.samples, "Monte-Carlo samples")->check(CLI::PositiveNumber);
    auto* sigma_opt = mc_cmd->add_option("--sigma", o.sigma, "Relative sigma of model inputs");
    auto* sigma_vf_opt = mc_cmd->add_option("--sigma-vf", o.sigma_vf, "Relative sigma of value factors");
    mc_cmd->add_option("--lcos", o.lcos, "LCOS reference CSV (default: bundled table)");
    mc_cmd->add_option("--lcos-sampling", o.lcos_sampling, "point or same_scheme")->capture_default_str();
    mc_cmd->add_flag("--emit-samples", o.emit_samples, "Also write every sample");
    mc_cmd->add_option("--workers", o.workers, "Worker threads (0: hardware concurrency)");

    synth_cmd->add_option("--days", o.days, "Days to generate")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--assets", o.assets, "Assets per pool")->check(CLI::PositiveNumber);
    synth_cmd->add_flag("--pool", o.pool, "Write per-asset pools instead of fleet totals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        return report_error(err, ExitCode::Usage, e.what());
    }
    o.seed_given = std::any_of(seed_opts.begin(), seed_opts.end(), [](auto* opt) { return opt->count() > 0; });
    o.sigma_given = sigma_opt->count() > 0;
    o.sigma_vf_given = sigma_vf_opt->count() > 0;

    const CLI::App* chosen = app.get_subcommands().front();
    const Invocation inv{chosen->get_name(), std::vector<std::string>(argv + 1, argv + argc), out};
    try {
        if (chosen == run_cmd) return cmd_run(o, inv);
        if (chosen == vf_cmd) return cmd_vf(o, inv);
        if (chosen == mc_cmd) return cmd_mc(o, inv);
        return cmd_synth(o, inv);
    } catch (const UsageError& e) {
        return report_error(err, ExitCode::Usage, e.what());
    } catch (const UncertaintyError& e) {
        using K = UncertaintyError::Kind;
        const ExitCode code = e.kind() == K::InvalidConfig               ? ExitCode::Usage
                              : e.kind() == K::PerturbationUnsatisfiable ? ExitCode::Config
                                                                         : ExitCode::Data;
        return report_error(err, code, e.what());
    } catch (const ParseError& e) {
        return report_error(err, ExitCode::Config, e.what());
    } catch (const ValidationError& e) {
        return report_error(err, ExitCode::Config, e.what());
    } catch (const SchemaVersionError& e) {
        return report_error(err, ExitCode::Config, e.what());
    } catch (const SizingError& e) {
        return report_error(err, ExitCode::Config, e.what());
    } catch (const CostingError& e) {
        return report_error(err, ExitCode::Config, e.what());
    } catch (const DataError& e) {
        return report_error(err, ExitCode::Data, e.what());
    } catch (const ValueFactorError& e) {
        return report_error(err, ExitCode::Data, e.what());
    } catch (const std::exception& e) {
        return report_error(err, ExitCode::Internal, e.what());
    }
}

}  // namespace lcodr::cli
