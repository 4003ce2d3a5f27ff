#include "lcodr/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "lcodr/errors.hpp"

namespace lcodr::mc {

namespace {

using Kind = UncertaintyError::Kind;

constexpr int kMaxAttempts = 100;
// Substream ids. Parameters use their registry index; later attempts and the
// other draw families live in disjoint ranges.
constexpr std::uint64_t kAttemptStride = 1'000;
constexpr std::uint64_t kValueFactorStream = 1'000'000;
constexpr std::uint64_t kLcosStream = 2'000'000;

double clamp_to_domain(double v, NumericField::Domain domain) {
    using D = NumericField::Domain;
    constexpr double kBelowOne = 1.0 - std::numeric_limits<double>::epsilon();
    switch (domain) {
        case D::Positive: return v;
        case D::NonNegative: return std::max(0.0, v);
        case D::UnitInterval: return std::clamp(v, 0.0, 1.0);
        case D::UnitOpenAbove: return std::clamp(v, 0.0, kBelowOne);
        case D::UnitOpenBelow: return std::clamp(v, std::numeric_limits<double>::min(), 1.0);
    }
    return v;
}

double perturb(double mean, double relative_sigma, const McConfig& c, std::size_t sample,
               std::uint64_t stream) {
    auto engine = rng::substream(c.seed, sample, stream);
    return sample_truncated_normal(mean, relative_sigma * std::abs(mean), c.truncation_z, engine);
}

unsigned worker_count(const McConfig& c) {
    unsigned w = c.workers != 0 ? c.workers : std::thread::hardware_concurrency();
    w = std::max(1U, w);
    return static_cast<unsigned>(std::min<std::size_t>(w, c.samples));
}

/// Runs fn(sample) for every sample, worker k taking samples k, k+W, ...
/// The first exception (by worker index) is rethrown after all workers join.
template <typename Fn>
void for_each_sample(const McConfig& c, Fn fn) {
    const unsigned workers = worker_count(c);
    std::vector<std::exception_ptr> errors(workers);
    auto body = [&](unsigned w) {
        try {
            for (std::size_t s = w; s < c.samples; s += workers) fn(s);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body, w);
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::string_view to_string(LcosSampling s) noexcept {
    return s == LcosSampling::Point ? "point" : "same_scheme";
}

void McConfig::validate() const {
    if (samples < 1) throw UncertaintyError(Kind::InvalidConfig, "samples must be >= 1");
    if (!(sigma_inputs >= 0.0) || !(sigma_vf >= 0.0)) {
        throw UncertaintyError(Kind::InvalidConfig, "standard deviations must be >= 0");
    }
    if (!(truncation_z > 0.0)) throw UncertaintyError(Kind::InvalidConfig, "truncation z must be > 0");
}

double sample_truncated_normal(double mean, double sigma, double z, rng::Engine& engine) {
    if (sigma == 0.0) return mean;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        const double x = normal(engine);
        if (std::abs(x) <= z) return mean + sigma * x;
    }
}

PerturbedInputs perturb_parameters(const ParameterSet& base, const ValueFactors& vf_base,
                                   const McConfig& config, std::size_t sample_index) {
    const auto fields = numeric_fields();
    PerturbedInputs out{base, vf_base};

    bool valid = false;
    for (int attempt = 0; attempt < kMaxAttempts && !valid; ++attempt) {
        out.params = base;
        for (std::size_t id = 0; id < fields.size(); ++id) {
            const NumericField& f = fields[id];
            if (!f.perturbed) continue;
            double& x = f.ref(out.params);
            const auto stream = static_cast<std::uint64_t>(attempt) * kAttemptStride + id;
            x = clamp_to_domain(perturb(x, config.sigma_inputs, config, sample_index, stream), f.domain);
        }
        try {
            validate(out.params);
            valid = true;
        } catch (const ValidationError&) {
        }
    }
    if (!valid) {
        throw UncertaintyError(Kind::PerturbationUnsatisfiable,
                               "no valid parameter draw for sample " + std::to_string(sample_index) +
                                   " after " + std::to_string(kMaxAttempts) + " attempts");
    }

    double* vfs[] = {&out.value_factors.smart_charging, &out.value_factors.heat_pump,
                     &out.value_factors.v2g_power, &out.value_factors.v2g_energy};
    for (std::size_t k = 0; k < std::size(vfs); ++k) {
        *vfs[k] = perturb(*vfs[k], config.sigma_vf, config, sample_index, kValueFactorStream + k);
    }
    return out;
}

std::string_view McDistribution::status() const noexcept {
    if (!suitable) return "unsuitable";
    return feasible_fraction > 0.0 ? "ok" : "infeasible";
}

void finalize(McDistribution& d) {
    std::vector<double> ok;
    ok.reserve(d.samples.size());
    for (std::size_t s = 0; s < d.samples.size(); ++s) {
        if (d.feasible[s]) ok.push_back(d.samples[s]);
    }
    d.feasible_fraction =
        d.samples.empty() ? 0.0 : static_cast<double>(ok.size()) / static_cast<double>(d.samples.size());
    d.summary = ok.empty() ? std::nullopt : std::optional<Summary>(summarize(ok));
}

std::vector<McDistribution> run_monte_carlo(std::span<const Scheme> schemes,
                                            std::span<const ApplicationSpec> apps,
                                            const ParameterSet& base, const ValueFactors& vf_base,
                                            const McConfig& config) {
    config.validate();
    const std::size_t n = config.samples;
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    using Shares = std::array<double, costing::kCostComponents>;

    std::vector<McDistribution> out;
    std::vector<std::vector<Shares>> shares;
    for (Scheme scheme : schemes) {
        for (const auto& app : apps) {
            McDistribution d;
            d.technology = std::string(to_string(scheme));
            d.scheme = scheme;
            d.application = app.name;
            d.suitable = app.suitable_schemes.contains(scheme);
            d.samples.assign(n, kNaN);
            d.feasible.assign(n, 0);
            out.push_back(std::move(d));
            shares.emplace_back(n, Shares{});
        }
    }

    for_each_sample(config, [&](std::size_t s) {
        const PerturbedInputs in = perturb_parameters(base, vf_base, config, s);
        std::size_t k = 0;
        for (Scheme scheme : schemes) {
            for (const auto& app : apps) {
                McDistribution& d = out[k];
                if (d.suitable) {
                    try {
                        const auto r = costing::evaluate_pairing(scheme, app, in.params, in.value_factors);
                        if (r.ok()) {
                            d.samples[s] = r.cost->lcodr_vf;
                            d.feasible[s] = 1;
                            shares[k][s] = r.cost->shares();
                        }
                    } catch (const Error&) {
                        // A degenerate draw counts as an infeasible sample.
                    }
                }
                ++k;
            }
        }
    });

    for (std::size_t k = 0; k < out.size(); ++k) {
        McDistribution& d = out[k];
        finalize(d);
        Shares sum{};
        std::size_t count = 0;
        for (std::size_t s = 0; s < n; ++s) {
            if (!d.feasible[s]) continue;
            for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += shares[k][s][c];
            ++count;
        }
        if (count > 0) {
            for (auto& v : sum) v /= static_cast<double>(count);
            d.mean_shares = sum;
        }
    }
    return out;
}

std::vector<McDistribution> lcos_distributions(const std::vector<data::LcosEntry>& entries,
                                               const McConfig& config) {
    config.validate();
    std::vector<McDistribution> out;
    for (std::size_t row = 0; row < entries.size(); ++row) {
        const auto& e = entries[row];
        McDistribution d;
        d.technology = e.technology;
        d.application = e.application;
        d.samples.resize(config.samples);
        d.feasible.assign(config.samples, 1);
        for (std::size_t s = 0; s < config.samples; ++s) {
            d.samples[s] = config.lcos_sampling == LcosSampling::Point
                               ? e.usd_per_mwh
                               : perturb(e.usd_per_mwh, config.sigma_inputs, config, s, kLcosStream + row);
        }
        finalize(d);
        out.push_back(std::move(d));
    }
    return out;
}

CheapestResult cheapest_probability(const std::string& application,
                                    std::span<const McDistribution> entrants) {
    CheapestResult r;
    r.application = application;
    if (entrants.empty()) {
        throw UncertaintyError(Kind::NoFeasibleTechnology, application + ": no technologies to compare");
    }
    const std::size_t n = entrants.front().samples.size();
    for (const auto& e : entrants) {
        if (e.samples.size() != n || e.feasible.size() != n) {
            throw UncertaintyError(Kind::InvalidConfig,
                                   application + ": entrants must share one sample count");
        }
        r.technologies.push_back(e.technology);
    }

    std::vector<std::size_t> wins(entrants.size(), 0);
    for (std::size_t s = 0; s < n; ++s) {
        std::optional<std::size_t> best;
        bool tied = false;
        for (std::size_t k = 0; k < entrants.size(); ++k) {
            if (!entrants[k].feasible[s]) continue;
            const double v = entrants[k].samples[s];
            if (!best || v < entrants[*best].samples[s]) {
                best = k;
                tied = false;
            } else if (v == entrants[*best].samples[s]) {
                tied = true;
            }
        }
        if (!best) continue;
        ++wins[*best];
        ++r.samples_considered;
        if (tied) ++r.ties;
    }
    if (r.samples_considered == 0) {
        throw UncertaintyError(Kind::NoFeasibleTechnology,
                               application + ": no sample has a feasible technology");
    }
    for (auto w : wins) {
        r.probabilities.push_back(static_cast<double>(w) / static_cast<double>(r.samples_considered));
    }
    return r;
}

}  // namespace lcodr::mc
