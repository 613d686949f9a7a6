#ifndef SCDEPTH_DIMENSION_HPP
#define SCDEPTH_DIMENSION_HPP

#include "scdepth/rng.hpp"
#include "scdepth/simplex.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

/**
 * @file dimension.hpp
 *
 * @brief Intrinsic-dimension estimation by explained variance, and
 * lower-dimensional synthetic populations by non-negative matrix
 * factorization.
 */

namespace scdepth {

/// Covariance spectrum of a population, eigenvalues descending.
struct Spectrum {
    std::vector<double> eigenvalues;
    double total_variance = 0;

    /// Cumulative explained fraction after 1, 2, ... components.
    std::vector<double> cumulative_fraction() const;
};

struct IntrinsicDimension {
    std::size_t k = 0;
    Spectrum spectrum;
    bool degenerate = false;  ///< zero total variance; k is reported as 0
};

/// Smallest number of leading eigenvalues whose sum reaches `threshold * total` (inclusive, with 1e-9 relative slack).
std::size_t components_for_threshold(std::span<const double> eigenvalues, double total, double threshold);

/**
 * Number of principal components of the weighted atom covariance needed to
 * capture `threshold` of the total variance.
 *
 * The covariance is formed in gene space when d <= 2000 and through the
 * N x N Gram matrix otherwise; both give the same nonzero spectrum.
 * Throws `InsufficientData` with fewer than two atoms.
 */
IntrinsicDimension pca_intrinsic_dim(const DiscreteDistribution& mu, double threshold = 0.95);

/// Writes `component,eigenvalue,cumulative_fraction` rows (component is 1-based).
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

/// NMF stops once ||M - W H||_F / ||M||_F falls to this level.
inline constexpr double kNmfExactRelativeError = 1e-13;

struct NmfOptions {
    std::size_t max_iters = 500;
    double tol = 1e-5;  ///< stop when the relative objective decrease falls below this
};

/// Non-negative factorization M ~ W H.
struct FactorPair {
    Eigen::MatrixXd W;  ///< N x r
    Eigen::MatrixXd H;  ///< r x d
    double relative_error = 0;  ///< ||W H - M||_F / ||M||_F
    std::vector<double> objective;  ///< 0.5 ||M - W H||_F^2 at init and after every iteration
    std::size_t iterations = 0;
    std::string algorithm = "lee-seung-multiplicative-frobenius";
};

/**
 * Rank-r NMF by Lee-Seung multiplicative updates on the Frobenius loss.
 *
 * W and H start uniform on (0, 1] from `rng`. The objective is
 * non-increasing across iterations.
 */
FactorPair nmf(const Eigen::MatrixXd& M, std::size_t rank, const NmfOptions& options, Rng& rng);

/// Stack the atoms of `mu` as the rows of a dense N x d matrix.
Eigen::MatrixXd atom_matrix(const DiscreteDistribution& mu);

struct LowDimPopulation {
    DiscreteDistribution mu_k;
    std::size_t k = 0;
    double relative_error = 0;  ///< ||rescaled(W H) - M||_F / ||M||_F
    double mean_l0 = 0;
    std::vector<std::size_t> kept_rows;  ///< source atom of each atom of mu_k
    std::vector<std::string> warnings;
    Spectrum spectrum;
};

/**
 * Rank-r synthetic version of `mu`: factorize the atom matrix, rescale each
 * row of W H back onto the simplex, and estimate its dimension. Rows of W H
 * that vanish are dropped with a warning.
 */
LowDimPopulation synthesize_low_dim(const DiscreteDistribution& mu, std::size_t rank, Rng& rng,
                                    const NmfOptions& options = {}, double threshold = 0.95);

} // namespace scdepth

#endif
