#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "lcodr/errors.hpp"
#include "lcodr/uncertainty.hpp"

using namespace lcodr;
using namespace lcodr::mc;

namespace {

std::vector<std::uint64_t> bits(const std::vector<double>& v) {
    std::vector<std::uint64_t> out;
    out.reserve(v.size());
    for (double x : v) out.push_back(std::bit_cast<std::uint64_t>(x));
    return out;
}

McDistribution entrant(std::string name, std::vector<double> samples, std::vector<std::uint8_t> feasible) {
    McDistribution d;
    d.technology = std::move(name);
    d.samples = std::move(samples);
    d.feasible = std::move(feasible);
    return d;
}

const ValueFactors kVf{1.27, 1.12, 0.97, 0.99};

}  // namespace

TEST(TruncatedNormal, StaysInsideBounds) {
    auto engine = rng::substream(9, 0, 0);
    const double mean = 10.0;
    const double sigma = 3.3;
    const double z = 1.285;
    double lo = mean;
    double hi = mean;
    double sum = 0.0;
    double sum_sq = 0.0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) {
        const double x = sample_truncated_normal(mean, sigma, z, engine);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        sum += x;
        sum_sq += x * x;
    }
    EXPECT_GE(lo, mean - z * sigma);
    EXPECT_LE(hi, mean + z * sigma);
    // Both tails are reached.
    EXPECT_LT(lo, mean - 0.99 * z * sigma);
    EXPECT_GT(hi, mean + 0.99 * z * sigma);
    // Symmetric truncation keeps the mean, to within 3 standard errors.
    const double m = sum / n;
    const double standard_error = std::sqrt((sum_sq / n - m * m) / n);
    EXPECT_NEAR(m, mean, 3.0 * standard_error);
}

TEST(TruncatedNormal, ZeroSigmaConsumesNothing) {
    auto a = rng::substream(1, 2, 3);
    auto b = a;
    EXPECT_EQ(sample_truncated_normal(4.2, 0.0, 1.285, a), 4.2);
    EXPECT_EQ(a(), b());
}

TEST(Perturbation, WithinTruncationAndValid) {
    const ParameterSet base = default_parameters();
    McConfig cfg;
    const auto fields = numeric_fields();
    for (std::size_t s = 0; s < 300; ++s) {
        const auto in = perturb_parameters(base, kVf, cfg, s);
        EXPECT_NO_THROW(validate(in.params));
        for (const auto& f : fields) {
            const double b = f.get(base);
            const double x = f.get(in.params);
            if (!f.perturbed) {
                EXPECT_EQ(x, b) << f.path();
                continue;
            }
            const double half_width = cfg.truncation_z * cfg.sigma_inputs * std::abs(b);
            EXPECT_LE(std::abs(x - b), half_width * (1.0 + 1e-12)) << f.path();
        }
        EXPECT_LE(std::abs(in.value_factors.heat_pump - kVf.heat_pump),
                  cfg.truncation_z * cfg.sigma_vf * kVf.heat_pump * (1.0 + 1e-12));
    }
}

TEST(Perturbation, KeyedBySampleIndex) {
    const ParameterSet base = default_parameters();
    const McConfig cfg;
    const auto late = perturb_parameters(base, kVf, cfg, 41);
    const auto early = perturb_parameters(base, kVf, cfg, 3);
    EXPECT_EQ(perturb_parameters(base, kVf, cfg, 41).params.ev.charger_power_kw, late.params.ev.charger_power_kw);
    EXPECT_EQ(perturb_parameters(base, kVf, cfg, 3).value_factors.v2g_energy, early.value_factors.v2g_energy);
    EXPECT_NE(late.params.ev.charger_power_kw, early.params.ev.charger_power_kw);
}

TEST(MonteCarlo, ConfigValidation) {
    McConfig cfg;
    cfg.samples = 0;
    EXPECT_THROW(cfg.validate(), UncertaintyError);
    cfg = McConfig{};
    cfg.sigma_inputs = -0.1;
    EXPECT_THROW(cfg.validate(), UncertaintyError);
    cfg = McConfig{};
    cfg.truncation_z = 0.0;
    EXPECT_THROW(cfg.validate(), UncertaintyError);
}

TEST(MonteCarlo, IdenticalAcrossWorkerCounts) {
    const auto apps = default_applications();
    McConfig cfg;
    cfg.samples = 150;
    cfg.workers = 1;
    const auto one = run_monte_carlo(kAllSchemes, apps, default_parameters(), kVf, cfg);
    for (unsigned w : {2U, 8U}) {
        cfg.workers = w;
        const auto many = run_monte_carlo(kAllSchemes, apps, default_parameters(), kVf, cfg);
        ASSERT_EQ(many.size(), one.size());
        for (std::size_t k = 0; k < one.size(); ++k) {
            EXPECT_EQ(bits(many[k].samples), bits(one[k].samples)) << w << " workers, " << k;
            EXPECT_EQ(many[k].feasible, one[k].feasible);
            EXPECT_EQ(many[k].summary, one[k].summary);
            EXPECT_EQ(many[k].mean_shares, one[k].mean_shares);
        }
    }
}

// A technology's draws do not depend on which other technologies are run.
TEST(MonteCarlo, CommonRandomNumbers) {
    const auto apps = default_applications();
    McConfig cfg;
    cfg.samples = 100;
    const auto all = run_monte_carlo(kAllSchemes, apps, default_parameters(), kVf, cfg);
    const std::array<Scheme, 1> only{Scheme::HeatPumpThermalStorage};
    const auto single = run_monte_carlo(only, apps, default_parameters(), kVf, cfg);
    const std::size_t offset = 3 * apps.size();
    for (std::size_t a = 0; a < apps.size(); ++a) {
        EXPECT_EQ(bits(single[a].samples), bits(all[offset + a].samples)) << apps[a].name;
    }
}

TEST(MonteCarlo, DegenerateEqualsDeterministic) {
    const auto apps = default_applications();
    const auto params = default_parameters();
    McConfig cfg;
    cfg.samples = 3;
    cfg.sigma_inputs = 0.0;
    cfg.sigma_vf = 0.0;
    const auto out = run_monte_carlo(kAllSchemes, apps, params, kVf, cfg);
    std::size_t k = 0;
    for (Scheme s : kAllSchemes) {
        for (const auto& app : apps) {
            const auto det = costing::evaluate_pairing(s, app, params, kVf);
            const auto& d = out[k++];
            if (det.ok()) {
                EXPECT_EQ(d.status(), "ok");
                for (double x : d.samples) EXPECT_EQ(x, det.cost->lcodr_vf) << d.technology << " " << app.name;
                EXPECT_EQ(d.summary->p5, d.summary->p95);
            } else {
                EXPECT_EQ(d.status(), app.suitable_schemes.contains(s) ? "infeasible" : "unsuitable");
                EXPECT_FALSE(d.summary);
            }
        }
    }
}

TEST(MonteCarlo, MeanSharesSumToOne) {
    McConfig cfg;
    cfg.samples = 100;
    const auto out = run_monte_carlo(kAllSchemes, default_applications(), default_parameters(), kVf, cfg);
    for (const auto& d : out) {
        if (!d.mean_shares) continue;
        EXPECT_NEAR(std::accumulate(d.mean_shares->begin(), d.mean_shares->end(), 0.0), 1.0, 1e-12);
    }
}

TEST(Lcos, PointAndPerturbed) {
    const std::vector<data::LcosEntry> table{{"A", "Li-ion", 300.0}, {"A", "Pumped hydro", 150.0}};
    McConfig cfg;
    cfg.samples = 500;
    const auto point = lcos_distributions(table, cfg);
    for (double x : point[0].samples) EXPECT_EQ(x, 300.0);
    EXPECT_EQ(point[1].status(), "ok");

    cfg.lcos_sampling = LcosSampling::SameScheme;
    const auto spread = lcos_distributions(table, cfg);
    for (double x : spread[1].samples) EXPECT_LE(std::abs(x - 150.0), 150.0 * 0.33 * 1.285 * (1 + 1e-12));
    EXPECT_LT(spread[1].summary->p5, spread[1].summary->p95);
}

TEST(Cheapest, HandCountedWins) {
    const std::vector<McDistribution> e{
        entrant("a", {1, 5, 3, 9, 0}, {1, 1, 1, 0, 0}),
        entrant("b", {2, 4, 3, 1, 0}, {1, 1, 1, 1, 0}),
    };
    const auto r = cheapest_probability("x", e);
    // Sample 2 is a tie won by the earlier entrant; sample 4 has no entrant.
    EXPECT_EQ(r.samples_considered, 4u);
    EXPECT_EQ(r.ties, 1u);
    EXPECT_EQ(r.probabilities, (std::vector<double>{0.5, 0.5}));
}

TEST(Cheapest, ShiftingDownNeverLowersProbability) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(50.0, 400.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<McDistribution> e;
        for (int k = 0; k < 4; ++k) {
            std::vector<double> v(200);
            std::vector<std::uint8_t> f(200);
            for (std::size_t s = 0; s < v.size(); ++s) {
                v[s] = u(rng);
                f[s] = u(rng) > 80.0;
            }
            e.push_back(entrant(std::to_string(k), v, f));
        }
        const std::size_t target = static_cast<std::size_t>(trial % 4);
        double previous = cheapest_probability("x", e).probabilities[target];
        for (int step = 0; step < 5; ++step) {
            for (double& x : e[target].samples) x -= 20.0;
            const double now = cheapest_probability("x", e).probabilities[target];
            EXPECT_GE(now, previous);
            previous = now;
        }
    }
}

TEST(Cheapest, NoFeasibleEntrant) {
    const std::vector<McDistribution> e{entrant("a", {1, 2}, {0, 0})};
    try {
        cheapest_probability("x", e);
        FAIL();
    } catch (const UncertaintyError& err) {
        EXPECT_EQ(err.kind(), UncertaintyError::Kind::NoFeasibleTechnology);
    }
    EXPECT_THROW(cheapest_probability("x", {}), UncertaintyError);
}

TEST(Cheapest, SimplexOverDefaults) {
    const auto apps = default_applications();
    McConfig cfg;
    cfg.samples = 400;
    const auto dr = run_monte_carlo(kAllSchemes, apps, default_parameters(), kVf, cfg);
    const std::vector<data::LcosEntry> lcos{{"", "Reference", 250.0}};
    for (std::size_t a = 0; a < apps.size(); ++a) {
        std::vector<McDistribution> entrants;
        for (std::size_t s = 0; s < kAllSchemes.size(); ++s) {
            const auto& d = dr[s * apps.size() + a];
            if (d.suitable) entrants.push_back(d);
        }
        auto ref = lcos_distributions(lcos, cfg);
        entrants.push_back(ref[0]);
        const auto r = cheapest_probability(apps[a].name, entrants);
        double total = 0.0;
        for (double p : r.probabilities) {
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
            total += p;
        }
        EXPECT_NEAR(total, 1.0, 1e-12) << apps[a].name;
        EXPECT_EQ(r.samples_considered, cfg.samples);
    }
}
