#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <sstream>

#include "lcodr/cli.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using test_support::read_csv;
using test_support::read_file;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "lcodr");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = lcodr::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string golden_header(const std::string& csv) {
    const fs::path p = fs::path(LCODR_GOLDEN_DIR) / (fs::path(csv).stem().string() + ".header");
    return read_file(p);
}

std::string first_line(const fs::path& p) {
    const std::string text = read_file(p);
    return text.substr(0, text.find('\n') + 1);
}

// Column index by header name.
std::map<std::string, std::size_t> columns(const std::vector<std::string>& header) {
    std::map<std::string, std::size_t> m;
    for (std::size_t i = 0; i < header.size(); ++i) m[header[i]] = i;
    return m;
}

class Cli : public ::testing::Test {
protected:
    fs::path dir = test_support::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());

    std::string out(const std::string& name) const { return (dir / name).string(); }

    void TearDown() override { fs::remove_all(dir); }
};

}  // namespace

TEST_F(Cli, RunCoversEveryPairing) {
    const auto r = run_cli({"run", "--out", out("run")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = read_csv(dir / "run" / "lcodr_deterministic.csv");
    ASSERT_EQ(rows.size(), 49u);
    const auto col = columns(rows[0]);
    std::size_t unsuitable = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const std::string& app = row[col.at("application")];
        const std::string& scheme = row[col.at("scheme")];
        const bool gated = app == "Seasonal storage" ||
                           (scheme != "V2G" && (app == "Black start" || app == "Power quality" ||
                                                app == "Power reliability"));
        EXPECT_EQ(row[col.at("status")] == "unsuitable", gated) << scheme << " / " << app;
        if (row[col.at("status")] != "feasible") EXPECT_TRUE(row[col.at("lcodr_vf")].empty());
        unsuitable += gated;
    }
    EXPECT_EQ(unsuitable, 13u);
}

TEST_F(Cli, ApplicationFilter) {
    const auto r = run_cli({"run", "--applications", "Energy arbitrage", "--out", out("run")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(read_csv(dir / "run" / "lcodr_deterministic.csv").size(), 5u);
}

TEST_F(Cli, MissingPriceWithComputeVf) {
    fs::create_directories(dir / "empty");
    const auto r = run_cli({"run", "--compute-vf", "--data", out("empty"), "--out", out("run")});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find((dir / "empty" / "price.csv").string()), std::string::npos) << r.err;
    EXPECT_EQ(r.err.rfind("error[data]: ", 0), 0u);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({}).code, 1);
    EXPECT_EQ(run_cli({"run", "--no-such-flag"}).code, 1);
    EXPECT_EQ(run_cli({"run", "--applications", "Moon landing", "--out", out("a")}).code, 1);
    EXPECT_EQ(run_cli({"mc", "--samples", "0", "--out", out("b")}).code, 1);
    EXPECT_EQ(run_cli({"run", "--set", "ev.charger_efficiency=1.2", "--out", out("c")}).code, 2);
    EXPECT_EQ(run_cli({"run", "--assume", "cycle_adjustment=sideways", "--out", out("d")}).code, 2);

    test_support::write_file(dir / "bad.json", "{ not json");
    const auto bad = run_cli({"run", "--config", out("bad.json"), "--out", out("e")});
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(bad.err.rfind("error[config]: ", 0), 0u);
    EXPECT_EQ(run_cli({"run", "--config", out("absent.json"), "--out", out("f")}).code, 2);

    EXPECT_EQ(run_cli({"--version"}).code, 0);
    EXPECT_EQ(run_cli({"run", "--help"}).code, 0);
}

TEST_F(Cli, GoldenHeaders) {
    ASSERT_EQ(run_cli({"run", "--out", out("run")}).code, 0);
    ASSERT_EQ(run_cli({"vf", "--out", out("vf")}).code, 0);
    ASSERT_EQ(run_cli({"mc", "--samples", "10", "--emit-samples", "--out", out("mc")}).code, 0);
    for (const auto& [sub, file] : std::vector<std::pair<std::string, std::string>>{
             {"run", "lcodr_deterministic.csv"},
             {"vf", "value_factors.csv"},
             {"mc", "lcodr_mc.csv"},
             {"mc", "cheapest_probability.csv"},
             {"mc", "cost_composition.csv"},
             {"mc", "lcodr_samples.csv"}}) {
        EXPECT_EQ(first_line(dir / sub / file), golden_header(file)) << file;
    }
}

TEST_F(Cli, ManifestRecordsRunAndDiscrepancy) {
    ASSERT_EQ(run_cli({"run", "--out", out("run")}).code, 0);
    const auto m = nlohmann::json::parse(read_file(dir / "run" / "manifest.json"));
    EXPECT_EQ(m["command"], "run");
    EXPECT_EQ(m["run_id"].get<std::string>().size(), 16u);
    const auto& base_hours = m["assumptions"]["reward_base_hours"];
    EXPECT_TRUE(base_hours["discrepancy"].get<bool>());
    EXPECT_EQ(base_hours["configured_h"], 11.5);
    EXPECT_EQ(base_hours["worked_example_h"], 10.0);
    EXPECT_TRUE(m["outputs"].contains("lcodr_deterministic.csv"));

    const auto rows = read_csv(dir / "run" / "lcodr_deterministic.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][0], m["run_id"]);
}

TEST_F(Cli, RerunsAreByteIdentical) {
    ASSERT_EQ(run_cli({"run", "--out", out("a")}).code, 0);
    ASSERT_EQ(run_cli({"run", "--out", out("b")}).code, 0);
    EXPECT_EQ(read_file(dir / "a" / "lcodr_deterministic.csv"), read_file(dir / "b" / "lcodr_deterministic.csv"));
}

TEST_F(Cli, MonteCarloIdenticalAcrossWorkers) {
    const std::vector<std::string> files{"lcodr_mc.csv", "cheapest_probability.csv", "cost_composition.csv",
                                         "lcodr_samples.csv"};
    std::map<std::string, std::string> first;
    for (const char* workers : {"1", "2", "8"}) {
        const std::string target = out(std::string("w") + workers);
        const auto r = run_cli({"mc", "--samples", "120", "--seed", "3", "--emit-samples", "--workers", workers,
                                "--out", target});
        ASSERT_EQ(r.code, 0) << r.err;
        for (const auto& f : files) {
            const std::string text = read_file(fs::path(target) / f);
            if (first.count(f) == 0) {
                first[f] = text;
            } else {
                EXPECT_EQ(text, first[f]) << f << " with " << workers << " workers";
            }
        }
    }
}

TEST_F(Cli, CostCompositionRowsSumToOne) {
    ASSERT_EQ(run_cli({"mc", "--samples", "50", "--out", out("mc")}).code, 0);
    const auto rows = read_csv(dir / "mc" / "cost_composition.csv");
    ASSERT_GT(rows.size(), 1u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double total = 0.0;
        for (std::size_t c = 3; c < rows[i].size(); ++c) total += std::stod(rows[i][c]);
        EXPECT_NEAR(total, 1.0, 1e-9) << rows[i][1] << " / " << rows[i][2];
    }
}

TEST_F(Cli, DegenerateMonteCarloEqualsDeterministic) {
    ASSERT_EQ(run_cli({"run", "--out", out("run")}).code, 0);
    ASSERT_EQ(run_cli({"mc", "--samples", "1", "--sigma", "0", "--out", out("mc")}).code, 0);

    std::map<std::pair<std::string, std::string>, std::string> deterministic;
    const auto det = read_csv(dir / "run" / "lcodr_deterministic.csv");
    const auto dc = columns(det[0]);
    for (std::size_t i = 1; i < det.size(); ++i) {
        deterministic[{det[i][dc.at("scheme")], det[i][dc.at("application")]}] = det[i][dc.at("lcodr_vf")];
    }
    const auto mc = read_csv(dir / "mc" / "lcodr_mc.csv");
    const auto mcol = columns(mc[0]);
    std::size_t compared = 0;
    for (std::size_t i = 1; i < mc.size(); ++i) {
        if (mc[i][mcol.at("kind")] != "dr") continue;
        const auto& want = deterministic.at({mc[i][mcol.at("technology")], mc[i][mcol.at("application")]});
        EXPECT_EQ(mc[i][mcol.at("mean")], want);
        EXPECT_EQ(mc[i][mcol.at("median")], want);
        compared += !want.empty();
    }
    EXPECT_EQ(compared, 33u);
}

TEST_F(Cli, SynthWritesAnnotatedData) {
    const auto r = run_cli({"synth", "--days", "3", "--assets", "4", "--pool", "--seed", "2", "--out", out("s")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"price.csv", "ev_charging.csv", "heat_pump.csv", "v2g_power.csv", "v2g_energy.csv"}) {
        EXPECT_EQ(read_file(dir / "s" / f).rfind("# synthetic sample data", 0), 0u) << f;
    }
    EXPECT_EQ(read_csv(dir / "s" / "ev_charging.csv").size(), 1u + 4u * 3u * 48u);
}

TEST_F(Cli, ConstantPriceGivesUnitValueFactors) {
    ASSERT_EQ(run_cli({"synth", "--days", "7", "--assets", "5", "--out", out("d")}).code, 0);
    std::string price = "timestamp,value\n";
    const auto rows = read_csv(dir / "d" / "ev_charging.csv");
    for (std::size_t i = 1; i < rows.size(); ++i) price += rows[i][0] + ",0.05\n";
    test_support::write_file(dir / "d" / "price.csv", price);

    const auto r = run_cli({"vf", "--data", out("d"), "--out", out("vf")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto vf = read_csv(dir / "vf" / "value_factors.csv");
    ASSERT_EQ(vf.size(), 5u);
    for (std::size_t i = 1; i < vf.size(); ++i) {
        for (std::size_t c = 2; c < 5; ++c) {
            if (!vf[i][c].empty()) EXPECT_NEAR(std::stod(vf[i][c]), 1.0, 1e-12) << vf[i][1];
        }
    }
}

TEST_F(Cli, SubsampleDistributionIsReproducible) {
    ASSERT_EQ(run_cli({"synth", "--days", "14", "--assets", "60", "--pool", "--out", out("pool")}).code, 0);
    const std::vector<std::string> args{"vf",         "--data", out("pool"), "--subsample", "50",
                                        "--iterations", "1000", "--seed",    "7"};
    auto a = args;
    a.insert(a.end(), {"--out", out("a")});
    auto b = args;
    b.insert(b.end(), {"--out", out("b")});
    ASSERT_EQ(run_cli(a).code, 0);
    ASSERT_EQ(run_cli(b).code, 0);
    const std::string dist = read_file(dir / "a" / "vf_distribution.csv");
    EXPECT_EQ(dist, read_file(dir / "b" / "vf_distribution.csv"));
    EXPECT_EQ(read_csv(dir / "a" / "vf_distribution.csv").size(), 1001u);

    // Fleet totals hold a single asset, which cannot be subsampled.
    const auto fleet = run_cli({"vf", "--subsample", "50", "--out", out("c")});
    EXPECT_EQ(fleet.code, 3);
}

TEST_F(Cli, EmitConfigFeedsRun) {
    ASSERT_EQ(run_cli({"vf", "--out", out("vf"), "--emit-config", out("cfg.json")}).code, 0);
    const auto cfg = nlohmann::json::parse(read_file(dir / "cfg.json"));
    EXPECT_TRUE(cfg.contains("schema_version"));
    const auto r = run_cli({"run", "--config", out("cfg.json"), "--out", out("run")});
    EXPECT_EQ(r.code, 0) << r.err;
}
