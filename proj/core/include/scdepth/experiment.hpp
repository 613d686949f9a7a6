#ifndef SCDEPTH_EXPERIMENT_HPP
#define SCDEPTH_EXPERIMENT_HPP

#include "scdepth/allocation.hpp"
#include "scdepth/ingest.hpp"
#include "scdepth/sequencing.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

/**
 * @file experiment.hpp
 *
 * @brief Grid sweeps over (read budget m, cell count n): repeated shallow
 * sequencing trials, mean transport error per cell, and the error-minimizing
 * n for each budget.
 */

namespace scdepth {

struct SweepConfig {
    std::vector<std::uint64_t> m_grid;
    std::vector<std::size_t> n_grid;
    std::size_t trials = 10;
    double p = 1.0;
    double q = 2.0;
    WeightModel::Kind scenario = WeightModel::Kind::Uniform;
    UnseenPolicy::Kind unseen_policy = UnseenPolicy::Kind::Uniform;
    ExpressionProfile unseen_profile;  ///< used when unseen_policy is Fixed
    std::uint64_t master_seed = 0;
    bool record_population_error = true;  ///< also compute W(mu_n, mu) per trial
    std::size_t workers = 1;
    std::optional<AllocationParams> theory;  ///< overlay n = optimal_cells(m) when set

    /// Grids nonempty and strictly increasing, trials >= 1, p >= 1, q >= 1.
    void validate() const;
};

/// Log-spaced integer grid from `lo` to `hi` with `count` points, deduplicated.
std::vector<std::uint64_t> log_grid(double lo, double hi, std::size_t count);

struct TrialRecord {
    double w_noisy_vs_mu = 0;   ///< W_p(mu-hat_n, mu)
    double w_noisy_vs_mun = 0;  ///< W_p(mu-hat_n, mu_n)
    double w_mun_vs_mu = 0;     ///< W_p(mu_n, mu); NaN when not recorded
    double convexity_lhs = 0;   ///< W_p^p(mu-hat_n, mu_n)
    double convexity_rhs = 0;   ///< (1/n) sum_i dist(P-hat_i, P_i)^p; NaN when the check does not apply
};

struct CellResult {
    std::uint64_t m = 0;
    std::size_t n = 0;
    std::vector<TrialRecord> trials;
    double mean_W = 0;  ///< mean of W_p(mu-hat_n, mu)
    double std_W = 0;   ///< sample standard deviation of the same
    std::string error;  ///< nonempty when the cell could not be evaluated

    bool ok() const noexcept { return error.empty(); }
};

/// Absolute slack allowed on the convexity inequality.
inline constexpr double kConvexitySlack = 1e-9;

/// Number of trials in `cell` whose convexity inequality fails beyond `kConvexitySlack`.
std::size_t convexity_violations(const CellResult& cell);

struct NStar {
    std::uint64_t m = 0;
    std::size_t n_star = 0;
    bool boundary = false;  ///< n* is the smallest or largest n of the grid
    double mean_W = 0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<CellResult> cells;  ///< m-major, in grid order
    std::vector<NStar> n_star;

    const CellResult& at(std::size_t mi, std::size_t ni) const { return cells[mi * config.n_grid.size() + ni]; }
};

/// Seed of trial `trial` at grid point (m, n).
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t m, std::size_t n, std::size_t trial);

/// One trial at (m, n). Throws `SizeLimit` if either transport problem is too large.
TrialRecord run_trial(const PopulationSpec& population, std::uint64_t m, std::size_t n, const SweepConfig& config,
                      std::uint64_t seed);

/// All trials at (m, n). Per-trial errors propagate with (m, n) in the message.
CellResult run_cell(const PopulationSpec& population, std::uint64_t m, std::size_t n, const SweepConfig& config);

/// Evaluate every grid cell on `config.workers` threads. Output does not depend on the worker count.
SweepResult sweep(const PopulationSpec& population, const SweepConfig& config);

/// Per m, the n with the lowest mean error among evaluated cells; ties go to the smallest n.
std::vector<NStar> find_optimal_n(const SweepResult& result);

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t points = 0;
};

/// Least squares of log n* on log m over non-boundary points. Throws `InsufficientData` below two points.
SlopeFit fit_slope(const std::vector<NStar>& n_star);

struct EnvelopeCheck {
    std::uint64_t m = 0;
    std::size_t n = 0;
    double mean = 0;        ///< mean W_p(mu-hat_n, mu_n)
    double sigma = 0;       ///< standard error of that mean
    double bound = 0;
    bool satisfied = true;  ///< mean >= bound - 3 sigma
};

/**
 * Compare mean W(mu-hat_n, mu_n) with the uniform-weight lower bound at
 * every cell where the bound's budget condition holds. Requires uniform
 * weights and q in [1, 2]; throws `InvalidArgument` otherwise.
 */
std::vector<EnvelopeCheck> lower_envelope(const SweepResult& result, double mean_sq_l2);

struct OutputOptions {
    int svg_width = 640;
    int svg_height = 480;
};

/**
 * Write `results.csv`, `summary.csv`, `nstar.csv`, `nstar.svg` and
 * `error_curves.svg` into `dir`. `nstar.csv` carries a `theory_n` column
 * only when the config has a theory overlay.
 */
void emit_outputs(const SweepResult& result, const std::filesystem::path& dir, const OutputOptions& options = {});

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);

struct SummaryRow {
    std::uint64_t m = 0;
    std::size_t n = 0;
    double mean_W = 0;
    double std_W = 0;
};

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

struct ResultRow {
    std::uint64_t m = 0;
    std::size_t n = 0;
    std::size_t trial = 0;
    TrialRecord record;
};

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

} // namespace scdepth

#endif
