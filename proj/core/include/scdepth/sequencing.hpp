#ifndef SCDEPTH_SEQUENCING_HPP
#define SCDEPTH_SEQUENCING_HPP

#include "scdepth/rng.hpp"
#include "scdepth/simplex.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

/**
 * @file sequencing.hpp
 *
 * @brief Two-stage read sampling: reads are assigned to cells by a
 * multinomial over cell weights, then each cell's reads are assigned to
 * genes by a multinomial over its expression profile.
 */

namespace scdepth {

/**
 * @brief How raw cell sampling frequencies are paired with profiles.
 *
 * - `Uniform`: every cell gets the same weight, u_i = 1/n.
 * - `Coupled`: the cell drawn from atom l carries frequency U_l.
 * - `Independent`: each cell gets a frequency drawn uniformly from the list,
 *   independently of which atom it came from.
 */
struct WeightModel {
    enum class Kind { Uniform, Coupled, Independent };

    Kind kind = Kind::Uniform;
    std::vector<double> frequencies;

    static WeightModel uniform() { return {}; }
    static WeightModel coupled(std::vector<double> f);
    static WeightModel independent(std::vector<double> f);
};

std::string_view to_string(WeightModel::Kind kind);
WeightModel::Kind parse_weight_kind(std::string_view name);

/// Per-cell read counts T_i; `total` is m.
struct ReadAllocation {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
};

/// What a cell that received no reads is reported as.
struct UnseenPolicy {
    enum class Kind {
        Uniform,  ///< the barycenter (1/d, ..., 1/d)
        Fixed,    ///< a caller-supplied profile
        Exclude,  ///< dropped from the noisy empirical distribution
    };

    Kind kind = Kind::Uniform;
    ExpressionProfile profile;  ///< used when kind == Fixed

    static UnseenPolicy uniform() { return {}; }
    static UnseenPolicy fixed(ExpressionProfile p) { return {Kind::Fixed, std::move(p)}; }
    static UnseenPolicy exclude() { return {Kind::Exclude, {}}; }
};

struct CellSample {
    std::vector<ExpressionProfile> cells;
    std::vector<double> raw_weights;
    std::vector<std::size_t> atom_index;  ///< which atom of mu each cell came from
};

struct SequencingRun {
    std::vector<ExpressionProfile> sampled_cells;  ///< P_i
    std::vector<double> weights;                   ///< normalized u_i
    ReadAllocation allocation;
    std::vector<ExpressionProfile> noisy_profiles; ///< P-hat_i; empty profile for excluded unseen cells
    std::vector<bool> seen;                        ///< T_i > 0
    UnseenPolicy::Kind unseen_policy = UnseenPolicy::Kind::Uniform;

    std::size_t size() const noexcept { return sampled_cells.size(); }
};

/// Multinomial(T, probs) counts by sequential binomial conditioning; cost is linear in `probs.size()`.
std::vector<std::uint64_t> multinomial_counts(std::uint64_t trials, std::span<const double> probs, Rng& rng);

/// Empirical profile of T iid categorical draws from `q`. Throws `InvalidTrials` when T == 0.
ExpressionProfile multinomial_estimate(std::uint64_t trials, const ExpressionProfile& q, Rng& rng);

/// Draw `n` cells iid from `mu` and pair them with raw frequencies per `scenario`.
CellSample sample_cells(const DiscreteDistribution& mu, std::size_t n, const WeightModel& scenario, Rng& rng);

/// T ~ Multinomial(m, u).
ReadAllocation allocate_reads(std::span<const double> u, std::uint64_t m, Rng& rng);

/**
 * Sequence `cells` with a budget of `m` reads.
 *
 * The raw weights are normalized to u, the read allocation T is drawn, and
 * every cell with T_i > 0 gets `multinomial_estimate(T_i, P_i)` from its own
 * substream `rng.derive(i)`. This is distributionally identical to assigning
 * reads one at a time.
 */
SequencingRun shallow_sequence(std::span<const ExpressionProfile> cells, std::span<const double> raw_weights,
                               std::uint64_t m, const UnseenPolicy& policy, Rng& rng);

/// Uniform measure over the noisy profiles (over seen cells only under `Exclude`).
DiscreteDistribution noisy_empirical(const SequencingRun& run);

/// Uniform measure over the true sampled profiles.
DiscreteDistribution true_empirical(const SequencingRun& run);

/// Smallest n * u_i; equals 1 under uniform weights.
double effective_c_star(std::span<const double> u);

} // namespace scdepth

#endif
