#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "lcodr/errors.hpp"
#include "lcodr/valuefactor.hpp"

using namespace lcodr;
using namespace std::chrono;

namespace {

const Timestamp kStart = sys_days{year{2023} / 1 / 1};

TimeSeries series(std::vector<double> values, seconds interval = seconds{1800}, Timestamp start = kStart) {
    TimeSeries s;
    s.start = start;
    s.interval = interval;
    s.values = std::move(values);
    return s;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

// Direct ratio of the availability-weighted mean price to the plain mean.
double oracle(const std::vector<double>& p, const std::vector<double>& a) {
    double pa = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) pa += p[i] * a[i];
    const double weighted_mean = pa / std::accumulate(a.begin(), a.end(), 0.0);
    const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(p.size());
    return weighted_mean / mean;
}

AvailabilityProfile load_profile(std::vector<double> values, std::string id) {
    AvailabilityProfile p;
    p.series = series(std::move(values));
    p.asset_id = std::move(id);
    return p;
}

}  // namespace

TEST(ValueFactor, TwoPointCase) {
    const std::vector<double> p{1.0, 3.0};
    const std::vector<double> a{0.0, 1.0};
    EXPECT_EQ(vf::value_factor(p, a), 1.5);
}

TEST(ValueFactor, ConstantSeriesGiveOne) {
    std::mt19937_64 rng(3);
    const auto a = random_values(rng, 500, 0.0, 5.0);
    EXPECT_NEAR(vf::value_factor(std::vector<double>(500, 0.07), a), 1.0, 1e-12);
    const auto p = random_values(rng, 500, 0.01, 0.3);
    EXPECT_NEAR(vf::value_factor(p, std::vector<double>(500, 2.0)), 1.0, 1e-12);
}

TEST(ValueFactor, MatchesOracle) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_values(rng, 1000, -0.05, 0.4);
        const auto a = random_values(rng, 1000, 0.0, 3.0);
        const double want = oracle(p, a);
        EXPECT_NEAR(vf::value_factor(p, a), want, 1e-12 * std::abs(want));
    }
}

TEST(ValueFactor, ScaleInvariance) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        const auto p = random_values(rng, 700, 0.01, 0.5);
        const auto a = random_values(rng, 700, 0.0, 2.0);
        const double base = vf::value_factor(p, a);
        for (double k : {1e-3, 0.5, 7.0, 1e4}) {
            auto ps = p;
            auto as = a;
            for (auto& x : ps) x *= k;
            for (auto& x : as) x *= k;
            EXPECT_NEAR(vf::value_factor(ps, a), base, 1e-12 * base);
            EXPECT_NEAR(vf::value_factor(p, as), base, 1e-12 * base);
        }
    }
}

TEST(ValueFactor, Errors) {
    const std::vector<double> p{1.0, 2.0};
    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const ValueFactorError& e) {
            return e.kind();
        }
        ADD_FAILURE() << "expected ValueFactorError";
        return ValueFactorError::Kind::NoOverlap;
    };
    using K = ValueFactorError::Kind;
    EXPECT_EQ(kind_of([&] { vf::value_factor(p, std::vector<double>{0.0, 0.0}); }), K::ZeroAvailabilityMean);
    EXPECT_EQ(kind_of([&] { vf::value_factor(std::vector<double>{1.0, -1.0}, p); }), K::ZeroPriceSum);
    EXPECT_EQ(kind_of([&] { vf::value_factor(p, std::vector<double>{1.0}); }), K::LengthMismatch);
}

TEST(Alignment, SameGridIsIdentity) {
    const auto price = series({1.0, 2.0, 3.0, 4.0});
    const auto avail = series({0.0, 1.0, 1.0, 0.0});
    const auto a = vf::align(price, avail);
    EXPECT_EQ(a.price.values, price.values);
    EXPECT_EQ(a.availability.values, avail.values);
    EXPECT_EQ(a.report.interval, seconds{1800});
}

TEST(Alignment, FineSeriesAveragedOntoCoarseGrid) {
    const auto price = series({10.0, 20.0}, hours{1});
    const auto avail = series({1.0, 3.0, 5.0, 7.0});
    const auto a = vf::align(price, avail);
    EXPECT_EQ(a.availability.values, (std::vector<double>{2.0, 6.0}));
    EXPECT_EQ(a.price.values, price.values);
    EXPECT_EQ(a.availability.interval, hours{1});
}

TEST(Alignment, PartialOverlapReportsDroppedSamples) {
    const auto price = series({1, 2, 3, 4, 5, 6});
    const auto avail = series({1, 1, 1, 1}, seconds{1800}, kStart + minutes{60});
    const auto a = vf::align(price, avail);
    EXPECT_EQ(a.price.values, (std::vector<double>{3, 4, 5, 6}));
    EXPECT_EQ(a.report.price_dropped_head, 2u);
    EXPECT_EQ(a.report.price_dropped_tail, 0u);
    EXPECT_EQ(a.price.start, kStart + minutes{60});

    // A half-hourly profile starting mid-hour loses its first sample on an hourly grid.
    const auto hourly = series({1, 2, 3}, hours{1});
    const auto offset = series({1, 1, 1, 1}, seconds{1800}, kStart + minutes{30});
    const auto b = vf::align(hourly, offset);
    EXPECT_EQ(b.price.values, (std::vector<double>{2}));
    EXPECT_EQ(b.report.profile_dropped_head, 1u);
    EXPECT_EQ(b.report.profile_dropped_tail, 1u);
}

TEST(Alignment, Incompatible) {
    using K = ValueFactorError::Kind;
    try {
        vf::align(series({1, 2}, seconds{1800}), series({1, 2}, seconds{1200}));
        FAIL();
    } catch (const ValueFactorError& e) {
        EXPECT_EQ(e.kind(), K::IncompatibleIntervals);
    }
    try {
        vf::align(series({1, 2}), series({1, 2}, seconds{1800}, kStart + minutes{10}));
        FAIL();
    } catch (const ValueFactorError& e) {
        EXPECT_EQ(e.kind(), K::IncompatibleIntervals);
    }
    try {
        vf::align(series({1, 2}), series({1, 2}, seconds{1800}, kStart + hours{5}));
        FAIL();
    } catch (const ValueFactorError& e) {
        EXPECT_EQ(e.kind(), K::NoOverlap);
    }
}

TEST(ValueFactor, EnergyBandWidth) {
    AvailabilityProfile energy;
    energy.kind = ProfileKind::V2GEnergyBoundaries;
    energy.series = series({0.0, 10.0, 0.0, 0.0});
    energy.upper = series({0.0, 20.0, 20.0, 0.0});
    AvailabilityProfile power;
    power.kind = ProfileKind::V2GPowerBoundary;
    power.series = series({0.0, 0.0, 1.0, 0.0});
    const auto price = series({1.0, 2.0, 3.0, 2.0});
    const auto v = vf::v2g_value_factors(price, power, energy);
    EXPECT_DOUBLE_EQ(v.power, 4.0 * 3.0 / (1.0 * 8.0));
    EXPECT_DOUBLE_EQ(v.energy, 4.0 * (2.0 * 10.0 + 3.0 * 20.0) / (30.0 * 8.0));
}

TEST(Aggregate, SumsPool) {
    std::vector<AvailabilityProfile> pool{load_profile({1, 2, 3}, "a"), load_profile({4, 5, 6}, "b")};
    EXPECT_EQ(vf::aggregate(pool).values, (std::vector<double>{5, 7, 9}));
    pool.push_back(load_profile({1, 2}, "c"));
    EXPECT_THROW(vf::aggregate(pool), ValueFactorError);
    EXPECT_THROW(vf::aggregate(std::vector<AvailabilityProfile>{}), ValueFactorError);
}

TEST(Subsample, DeterministicAndBounded) {
    std::mt19937_64 rng(11);
    const auto price = series(random_values(rng, 96, 0.02, 0.3));
    std::vector<AvailabilityProfile> pool;
    for (int k = 0; k < 30; ++k) pool.push_back(load_profile(random_values(rng, 96, 0.0, 2.0), std::to_string(k)));

    const vf::SubsampleConfig cfg{10, 200, 7};
    const auto a = vf::vf_subsample_mc(pool, price, cfg);
    const auto b = vf::vf_subsample_mc(pool, price, cfg);
    ASSERT_EQ(a.samples.size(), 200u);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_LE(a.summary.p5, a.summary.median);
    EXPECT_LE(a.summary.median, a.summary.p95);

    const auto other = vf::vf_subsample_mc(pool, price, {10, 200, 8});
    EXPECT_NE(a.samples, other.samples);

    // Drawing the whole pool reproduces the fleet value factor every time.
    const auto full = vf::vf_subsample_mc(pool, price, {30, 5, 7});
    const double fleet = vf::value_factor(price, vf::aggregate(pool));
    for (double x : full.samples) EXPECT_NEAR(x, fleet, 1e-12);
}

TEST(Subsample, TooFewAssets) {
    std::vector<AvailabilityProfile> pool{load_profile({1, 2}, "a")};
    EXPECT_THROW(vf::vf_subsample_mc(pool, series({1, 2}), {2, 10, 1}), ValueFactorError);
    EXPECT_THROW(vf::vf_subsample_mc(pool, series({1, 2}), {1, 0, 1}), ValueFactorError);
}
