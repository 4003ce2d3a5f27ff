#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lcodr/costing.hpp"
#include "lcodr/data.hpp"
#include "lcodr/model.hpp"
#include "lcodr/random.hpp"
#include "lcodr/stats.hpp"

namespace lcodr::mc {

enum class LcosSampling : std::uint8_t {
    Point,       ///< published values, identical in every sample
    SameScheme,  ///< perturbed like the model inputs
};
std::string_view to_string(LcosSampling s) noexcept;

struct McConfig {
    std::size_t samples = 1000;
    double sigma_inputs = 0.33;  ///< relative standard deviation of every input
    double sigma_vf = 0.10;      ///< relative standard deviation of value factors
    double truncation_z = 1.285;
    std::uint64_t seed = 20240101;
    LcosSampling lcos_sampling = LcosSampling::Point;
    unsigned workers = 0;        ///< 0 picks the hardware concurrency

    /// Throws UncertaintyError(InvalidConfig).
    void validate() const;
};

/// Normal(mean, sigma) conditioned on [mean - z sigma, mean + z sigma], by
/// rejection. sigma == 0 returns mean without consuming randomness.
double sample_truncated_normal(double mean, double sigma, double z, rng::Engine& engine);

struct PerturbedInputs {
    ParameterSet params;
    ValueFactors value_factors;
};

/// Draws one Monte-Carlo sample. Each parameter has its own substream keyed
/// by (seed, sample_index, parameter id), so every technology sees the same
/// draw. Draws that break an invariant are redrawn up to 100 times.
PerturbedInputs perturb_parameters(const ParameterSet& base, const ValueFactors& vf_base,
                                   const McConfig& config, std::size_t sample_index);

struct McDistribution {
    std::string technology;
    std::optional<Scheme> scheme;  ///< empty for LCOS references
    std::string application;
    bool suitable = true;
    std::vector<double> samples;   ///< lcodr_vf, NaN where infeasible
    std::vector<std::uint8_t> feasible;
    std::optional<Summary> summary;  ///< over feasible samples
    double feasible_fraction = 0.0;
    /// Mean cost shares over feasible samples, in CostComponent order.
    std::optional<std::array<double, costing::kCostComponents>> mean_shares;

    /// "ok", "unsuitable" or "infeasible".
    std::string_view status() const noexcept;
};

/// Fills summary, feasible_fraction from samples and the mask.
void finalize(McDistribution& d);

/// Evaluates every (scheme, application) pairing on each sample. Output is
/// ordered scheme-major, then application, and is bit-identical for a given
/// seed whatever the worker count.
std::vector<McDistribution> run_monte_carlo(std::span<const Scheme> schemes,
                                            std::span<const ApplicationSpec> apps,
                                            const ParameterSet& base, const ValueFactors& vf_base,
                                            const McConfig& config);

/// Sample vectors for the reference storage technologies of one application.
std::vector<McDistribution> lcos_distributions(const std::vector<data::LcosEntry>& entries,
                                               const McConfig& config);

struct CheapestResult {
    std::string application;
    std::vector<std::string> technologies;
    std::vector<double> probabilities;  ///< parallel to technologies
    std::size_t samples_considered = 0; ///< samples with at least one feasible entrant
    std::size_t ties = 0;               ///< samples whose minimum was shared
};

/// Per sample index, the cheapest feasible entrant wins; exact ties go to the
/// earlier entrant. Probabilities are over samples with a feasible entrant.
/// Throws NoFeasibleTechnology when no sample has one.
CheapestResult cheapest_probability(const std::string& application,
                                    std::span<const McDistribution> entrants);

}  // namespace lcodr::mc
