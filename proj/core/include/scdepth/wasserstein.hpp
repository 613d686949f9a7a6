#ifndef SCDEPTH_WASSERSTEIN_HPP
#define SCDEPTH_WASSERSTEIN_HPP

#include "scdepth/simplex.hpp"

#include <cstddef>
#include <span>
#include <vector>

/**
 * @file wasserstein.hpp
 *
 * @brief Exact optimal transport between finitely supported measures on the
 * simplex, with an l_q ground metric raised to the power p.
 *
 * The solver is an unregularized primal network simplex. Masses are put on
 * an integer grid before solving so every pivot is exact in the flows; the
 * objective is evaluated in floating point from the optimal basis.
 */

namespace scdepth {

/// Dense problems larger than this many cost entries are rejected with `SizeLimit`.
inline constexpr std::size_t kMaxCostEntries = 10'000'000;

/// Common denominator used when the marginals are not both uniform.
inline constexpr std::int64_t kMassGrid = 1'000'000'000;

class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols, double p, double q);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    double p_;
    double q_;
    std::vector<double> data_;
};

/// Sparse coupling; only cells with positive mass are stored.
struct TransportPlan {
    struct Entry {
        std::size_t source;
        std::size_t target;
        double mass;
    };

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<Entry> entries;

    std::vector<double> row_sums() const;
    std::vector<double> col_sums() const;
};

/**
 * @brief Result of an exact transport solve.
 *
 * The potentials satisfy `cost(i,j) - source_potential[i] - target_potential[j] >= min_reduced_cost`
 * on every cell and are tight on the plan's support. `duality_gap` is the
 * primal value minus the dual objective; together the two numbers certify
 * optimality.
 */
struct EmdResult {
    double value = 0;
    TransportPlan plan;
    std::vector<double> source_potential;
    std::vector<double> target_potential;
    double duality_gap = 0;
    double min_reduced_cost = 0;
    double max_support_reduced_cost = 0;
    std::size_t pivots = 0;
};

/// Entry (i, j) = ||a_i - b_j||_q^p. Throws `SizeLimit` past `kMaxCostEntries`.
CostMatrix cost_matrix(const DiscreteDistribution& a, const DiscreteDistribution& b, double p, double q);

/**
 * Minimum of <plan, cost> over couplings of `weights_a` and `weights_b`.
 *
 * Throws `MassMismatch` when the total masses differ by more than 1e-6, and
 * `DimensionMismatch` when the weight lengths do not match the cost shape.
 */
EmdResult emd(std::span<const double> weights_a, std::span<const double> weights_b, const CostMatrix& cost);

/// W_p(a, b) with an l_q ground metric: `emd(...)^(1/p)`.
double wasserstein_p(const DiscreteDistribution& a, const DiscreteDistribution& b, double p, double q);

/**
 * Brute-force W_p between two uniform measures with the same number k <= 8
 * of atoms, by enumerating all k! matchings. Optimal plans between equal-size
 * uniform measures can be taken to be permutations, so this is exact.
 * Throws `TooLarge` when k > 8.
 */
double assignment_oracle(std::span<const ExpressionProfile> atoms_a, std::span<const ExpressionProfile> atoms_b,
                         double p, double q);

} // namespace scdepth

#endif
