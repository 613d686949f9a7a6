#include "scdepth/sequencing.hpp"

#include "scdepth/error.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace scdepth {

namespace {

void check_frequencies(const std::vector<double>& f) {
    if (f.empty()) {
        throw Error(ErrorCode::InvalidArgument, "weight model needs a nonempty frequency list");
    }
    for (double u : f) {
        if (!(u > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "cell frequencies must be positive");
        }
    }
}

std::uint64_t draw_binomial(std::uint64_t trials, double p, Rng& rng) {
    if (trials == 0 || p <= 0.0) {
        return 0;
    }
    if (p >= 1.0) {
        return trials;
    }
    std::binomial_distribution<std::uint64_t> dist(trials, p);
    return dist(rng);
}

} // namespace

WeightModel WeightModel::coupled(std::vector<double> f) {
    check_frequencies(f);
    return {Kind::Coupled, std::move(f)};
}

WeightModel WeightModel::independent(std::vector<double> f) {
    check_frequencies(f);
    return {Kind::Independent, std::move(f)};
}

std::string_view to_string(WeightModel::Kind kind) {
    switch (kind) {
    case WeightModel::Kind::Uniform: return "uniform";
    case WeightModel::Kind::Coupled: return "coupled";
    case WeightModel::Kind::Independent: return "independent";
    }
    return "uniform";
}

WeightModel::Kind parse_weight_kind(std::string_view name) {
    if (name == "uniform") return WeightModel::Kind::Uniform;
    if (name == "coupled") return WeightModel::Kind::Coupled;
    if (name == "independent") return WeightModel::Kind::Independent;
    throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

std::vector<std::uint64_t> multinomial_counts(std::uint64_t trials, std::span<const double> probs, Rng& rng) {
    std::vector<std::uint64_t> out(probs.size(), 0);
    double remaining_mass = 0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "negative probability passed to multinomial");
        }
        remaining_mass += p;
    }
    if (!(remaining_mass > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "multinomial needs a positive probability");
    }

    std::uint64_t left = trials;
    // The last positive category absorbs whatever remains so sum(out) == trials exactly.
    std::size_t last = probs.size();
    while (last > 0 && probs[last - 1] <= 0.0) {
        --last;
    }
    for (std::size_t k = 0; k + 1 < last && left > 0; ++k) {
        if (probs[k] <= 0.0) {
            continue;
        }
        const double cond = std::min(1.0, probs[k] / remaining_mass);
        const auto x = draw_binomial(left, cond, rng);
        out[k] = x;
        left -= x;
        remaining_mass -= probs[k];
    }
    if (last > 0) {
        out[last - 1] += left;
    }
    return out;
}

ExpressionProfile multinomial_estimate(std::uint64_t trials, const ExpressionProfile& q, Rng& rng) {
    if (trials == 0) {
        throw Error(ErrorCode::InvalidTrials, "multinomial_estimate needs T >= 1");
    }
    const auto counts = multinomial_counts(trials, q.values(), rng);
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    idx.reserve(counts.size());
    val.reserve(counts.size());
    const auto support = q.indices();
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] > 0) {
            idx.push_back(support[k]);
            val.push_back(static_cast<double>(counts[k]));
        }
    }
    return ExpressionProfile(q.dim(), std::move(idx), std::move(val));
}

CellSample sample_cells(const DiscreteDistribution& mu, std::size_t n, const WeightModel& scenario, Rng& rng) {
    if (n == 0) {
        throw Error(ErrorCode::InvalidArgument, "sample_cells needs n >= 1");
    }
    if (mu.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cannot sample from an empty population");
    }
    if (scenario.kind == WeightModel::Kind::Coupled && scenario.frequencies.size() != mu.size()) {
        throw Error(ErrorCode::ScenarioMismatch, "coupled frequencies (" + std::to_string(scenario.frequencies.size()) +
                                                     ") do not align with population atoms (" +
                                                     std::to_string(mu.size()) + ")");
    }
    if (scenario.kind == WeightModel::Kind::Independent && scenario.frequencies.empty()) {
        throw Error(ErrorCode::ScenarioMismatch, "independent scenario has an empty frequency list");
    }

    CellSample out;
    out.cells.reserve(n);
    out.raw_weights.reserve(n);
    out.atom_index.reserve(n);

    std::uniform_int_distribution<std::size_t> uniform_atom(0, mu.size() - 1);
    std::discrete_distribution<std::size_t> weighted_atom;
    if (!mu.is_uniform()) {
        weighted_atom = std::discrete_distribution<std::size_t>(mu.weights().begin(), mu.weights().end());
    }
    std::uniform_int_distribution<std::size_t> uniform_freq(
        0, scenario.frequencies.empty() ? 0 : scenario.frequencies.size() - 1);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = mu.is_uniform() ? uniform_atom(rng) : weighted_atom(rng);
        out.atom_index.push_back(l);
        out.cells.push_back(mu.atom(l));
        switch (scenario.kind) {
        case WeightModel::Kind::Uniform: out.raw_weights.push_back(1.0); break;
        case WeightModel::Kind::Coupled: out.raw_weights.push_back(scenario.frequencies[l]); break;
        case WeightModel::Kind::Independent: out.raw_weights.push_back(scenario.frequencies[uniform_freq(rng)]); break;
        }
    }
    return out;
}

ReadAllocation allocate_reads(std::span<const double> u, std::uint64_t m, Rng& rng) {
    if (u.empty()) {
        throw Error(ErrorCode::InvalidArgument, "allocate_reads needs at least one cell");
    }
    ReadAllocation out;
    out.total = m;
    out.counts = multinomial_counts(m, u, rng);
    return out;
}

SequencingRun shallow_sequence(std::span<const ExpressionProfile> cells, std::span<const double> raw_weights,
                               std::uint64_t m, const UnseenPolicy& policy, Rng& rng) {
    if (cells.empty()) {
        throw Error(ErrorCode::InvalidArgument, "shallow_sequence needs at least one cell");
    }
    if (raw_weights.size() != cells.size()) {
        throw Error(ErrorCode::InvalidArgument, "one raw weight per cell is required");
    }
    const std::size_t n = cells.size();
    const std::size_t d = cells.front().dim();
    if (policy.kind == UnseenPolicy::Kind::Fixed && policy.profile.dim() != d) {
        throw Error(ErrorCode::DimensionMismatch, "unseen-cell profile has the wrong dimension");
    }

    SequencingRun run;
    run.sampled_cells.assign(cells.begin(), cells.end());
    run.unseen_policy = policy.kind;

    const double total = std::accumulate(raw_weights.begin(), raw_weights.end(), 0.0);
    if (!(total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "raw weights have zero total");
    }
    run.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(raw_weights[i] >= 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "raw weights must be nonnegative");
        }
        run.weights[i] = raw_weights[i] / total;
    }

    Rng alloc_rng = rng.derive(0xA110CA7EULL);
    run.allocation = allocate_reads(run.weights, m, alloc_rng);

    run.noisy_profiles.resize(n);
    run.seen.assign(n, false);
    const ExpressionProfile fallback = policy.kind == UnseenPolicy::Kind::Fixed ? policy.profile
                                       : policy.kind == UnseenPolicy::Kind::Uniform ? ExpressionProfile::uniform(d)
                                                                                    : ExpressionProfile{};
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = run.allocation.counts[i];
        if (t > 0) {
            Rng cell_rng = rng.derive({0xCE11ULL, i});
            run.noisy_profiles[i] = multinomial_estimate(t, cells[i], cell_rng);
            run.seen[i] = true;
        } else {
            run.noisy_profiles[i] = fallback;
        }
    }
    return run;
}

DiscreteDistribution noisy_empirical(const SequencingRun& run) {
    std::vector<ExpressionProfile> atoms;
    atoms.reserve(run.size());
    for (std::size_t i = 0; i < run.size(); ++i) {
        if (run.seen[i] || run.unseen_policy != UnseenPolicy::Kind::Exclude) {
            atoms.push_back(run.noisy_profiles[i]);
        }
    }
    if (atoms.empty()) {
        throw Error(ErrorCode::InsufficientData, "no cell received a read and unseen cells are excluded");
    }
    return DiscreteDistribution::uniform(std::move(atoms));
}

DiscreteDistribution true_empirical(const SequencingRun& run) {
    return DiscreteDistribution::uniform(run.sampled_cells);
}

double effective_c_star(std::span<const double> u) {
    if (u.empty()) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    if (*lo == *hi) {
        return 1.0;
    }
    return static_cast<double>(u.size()) * *lo;
}

} // namespace scdepth
