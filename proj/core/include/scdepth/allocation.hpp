#ifndef SCDEPTH_ALLOCATION_HPP
#define SCDEPTH_ALLOCATION_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>

/**
 * @file allocation.hpp
 *
 * @brief Closed-form read-budget bounds and the optimal cells-versus-depth
 * allocation rule.
 *
 * Every quantity here is asymptotic. The `omitted` strings name the terms
 * each function leaves out, so callers can print them next to the value.
 */

namespace scdepth {

struct AllocationParams {
    double p = 1.0;         ///< Wasserstein order, in [1, 2]
    double alpha = 0.5;     ///< tail exponent, in (0, 1)
    double c_star = 1.0;    ///< lower bound on n * u_i for most cells
    double C = 0.5;         ///< constant in the optimal allocation rule
    std::size_t k = 0;      ///< intrinsic dimension; the allocation rule needs k > 4
    double mean_l0 = 1.0;   ///< E ||P||_0
    double mean_sq_l2 = 0;  ///< E ||P||_2^2

    /// Throws `InvalidArgument` naming the first field outside its range. `k` is checked only when `need_k`.
    void validate(bool need_k = false) const;
};

namespace omitted {
inline constexpr std::string_view kMinReads = "none";
inline constexpr std::string_view kUpper = "o_n(1)";
inline constexpr std::string_view kLower = "none";
inline constexpr std::string_view kOptimalCells = "proportionality constant replaced by C";
inline constexpr std::string_view kRate = "multiplicative constant";
inline constexpr std::string_view kFullLower = "O(n^{-1/k}) replaced by const * n^{-1/k}";
} // namespace omitted

/// Reads sufficient for E W_p <= eps with n cells, floored at zero. Requires n >= 2 and eps in (0, 1).
double min_reads(double n, double eps, const AllocationParams& params);

/// sqrt(8 E||P||_0 n / (c_* m)).
double expected_error_upper(double n, double m, const AllocationParams& params);

struct LowerBound {
    double bound = 0;
    bool valid = false;  ///< m >= 2 n log(4 / (1 - E||P||_2^2))
};

/// (1 - E||P||_2^2) / 4 * n / m under uniform cell weights.
LowerBound expected_error_lower(double n, double m, const AllocationParams& params);

/// n = (C m / E||P||_0)^(1 - 2/(k+2)).
double optimal_cells(double m, const AllocationParams& params);

/// Smallest budget the allocation rule is stated for: 8 (1 + alpha) E||P||_0 / c_*.
double allocation_guard(const AllocationParams& params);

/// True when `m` does not exceed `allocation_guard`.
bool below_allocation_guard(double m, const AllocationParams& params);

/// (E||P||_0 / m)^(1/(k+2)).
double rate_upper(double m, const AllocationParams& params);

/// max(0, (1 - E||P||_2^2)/4 * n/m - constant * n^(-1/k)).
double full_lower_bound(double n, double m, double constant, const AllocationParams& params);

/// Rows `m,n_opt,upper_rate,lower_bound`; the lower bound is evaluated at (n_opt, m).
void write_theory_curve_csv(const std::filesystem::path& path, std::span<const double> budgets,
                            const AllocationParams& params);

} // namespace scdepth

#endif
