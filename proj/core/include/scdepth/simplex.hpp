#ifndef SCDEPTH_SIMPLEX_HPP
#define SCDEPTH_SIMPLEX_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

/**
 * @file simplex.hpp
 *
 * @brief Points and finitely supported measures on the probability simplex.
 */

namespace scdepth {

/// Tolerance on the unit sum of a profile.
inline constexpr double kProfileSumTolerance = 1e-9;

/// Tolerance on the unit sum of distribution weights.
inline constexpr double kWeightSumTolerance = 1e-12;

/// Ground-metric exponent standing for the max-abs norm.
inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/**
 * @brief Relative gene expression of one cell, a point on the (d-1)-simplex.
 *
 * Stored sparse: strictly positive entries only, indices ascending, so the
 * number of stored entries is the l0 norm. Every constructor renormalizes
 * the values to sum to one.
 */
class ExpressionProfile {
public:
    ExpressionProfile() = default;

    /**
     * @param dim Ambient dimension d.
     * @param indices Ascending, distinct indices below `dim`.
     * @param values Nonnegative values aligned with `indices`; zeros are dropped.
     * Must contain at least one positive value.
     */
    ExpressionProfile(std::size_t dim, std::vector<std::uint32_t> indices, std::vector<double> values);

    /// Build from a dense nonnegative vector (normalized on the way in).
    static ExpressionProfile from_dense(std::span<const double> dense);

    /// Standard basis vector e_j.
    static ExpressionProfile basis(std::size_t dim, std::size_t j);

    /// The barycenter (1/d, ..., 1/d).
    static ExpressionProfile uniform(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t nnz() const noexcept { return indices_.size(); }
    std::span<const std::uint32_t> indices() const noexcept { return indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry j (zero when not stored).
    double operator[](std::size_t j) const;

    std::vector<double> to_dense() const;

    /// Squared Euclidean norm.
    double squared_l2() const noexcept;

    bool operator==(const ExpressionProfile&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<std::uint32_t> indices_;
    std::vector<double> values_;
};

/**
 * @brief Finitely supported probability measure on the simplex.
 *
 * Weights are normalized on construction. `is_uniform()` is set when the
 * measure was built through `uniform()`; the transport solver uses it to
 * pick an exact integer mass grid.
 */
class DiscreteDistribution {
public:
    DiscreteDistribution() = default;

    DiscreteDistribution(std::vector<ExpressionProfile> atoms, std::vector<double> weights);

    /// Uniform mixture 1/N over `atoms`.
    static DiscreteDistribution uniform(std::vector<ExpressionProfile> atoms);

    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }
    std::size_t dim() const noexcept { return atoms_.empty() ? 0 : atoms_.front().dim(); }
    bool is_uniform() const noexcept { return uniform_; }

    const std::vector<ExpressionProfile>& atoms() const noexcept { return atoms_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    const ExpressionProfile& atom(std::size_t i) const { return atoms_[i]; }
    double weight(std::size_t i) const { return weights_[i]; }

private:
    std::vector<ExpressionProfile> atoms_;
    std::vector<double> weights_;
    bool uniform_ = false;
};

struct PopulationStats {
    double mean_l0 = 0;     ///< weighted mean of ||P||_0
    double mean_sq_l2 = 0;  ///< weighted mean of ||P||_2^2
    std::size_t ambient_dim = 0;
    std::size_t atom_count = 0;
};

/// Divide a nonnegative count row by its total. Throws `ZeroRow` on an all-zero row.
ExpressionProfile normalize_counts_row(std::span<const std::uint64_t> counts);

/// Sparse variant: `(index, count)` pairs with positive counts.
ExpressionProfile normalize_counts_row(std::size_t dim, std::span<const std::uint32_t> indices,
                                       std::span<const std::uint64_t> counts);

/// Number of nonzero entries.
inline std::size_t l0_norm(const ExpressionProfile& p) noexcept { return p.nnz(); }

/// l_q distance, q in [1, inf]; pass `kInfinityNorm` for the max-abs norm.
double lq_distance(const ExpressionProfile& a, const ExpressionProfile& b, double q);

PopulationStats population_stats(const DiscreteDistribution& mu);

} // namespace scdepth

#endif
