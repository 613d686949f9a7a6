#ifndef SCDEPTH_INGEST_HPP
#define SCDEPTH_INGEST_HPP

#include "scdepth/sequencing.hpp"
#include "scdepth/simplex.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

/**
 * @file ingest.hpp
 *
 * @brief Counts matrices on disk, gene filtering, and ground-truth
 * populations built from normalized count rows.
 *
 * Two input layouts are read:
 *
 * - CSV: a header row of gene ids (optionally preceded by a corner label),
 *   then one row per cell whose first field is the cell id.
 * - MatrixMarket `coordinate integer general`, 1-based, rows are cells and
 *   columns are genes. Ids come from `genes.tsv` / `cells.tsv` next to the
 *   file when present (first tab-separated column), else `gene_<j>` / `cell_<i>`.
 */

namespace scdepth {

/// Sparse cells x genes integer counts; each row keeps strictly positive entries in ascending gene order.
struct CountsMatrix {
    struct Row {
        std::vector<std::uint32_t> genes;
        std::vector<std::uint64_t> counts;
    };

    std::vector<Row> rows;
    std::vector<std::string> gene_ids;
    std::vector<std::string> cell_ids;

    std::size_t cells() const noexcept { return rows.size(); }
    std::size_t genes() const noexcept { return gene_ids.size(); }
    std::uint64_t row_total(std::size_t i) const;
};

enum class CountsFormat { Csv, MatrixMarket };

/// "csv" or "mtx"; throws `InvalidArgument` otherwise.
CountsFormat parse_counts_format(std::string_view name);

/// Guess from the extension (.mtx -> MatrixMarket, otherwise CSV).
CountsFormat infer_counts_format(const std::filesystem::path& path);

/// Throws `ParseError` (with the offending line number) on malformed input and `Io` when unreadable.
CountsMatrix read_counts(const std::filesystem::path& path, CountsFormat format);

/// Writes `counts.mtx`, `genes.tsv` and `cells.tsv` into `dir`.
void write_counts(const std::filesystem::path& dir, const CountsMatrix& counts);

/// One preprocessing event, kept for the provenance sidecar.
struct PreprocessStep {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
};

struct Provenance {
    std::string source;
    std::string format;
    std::size_t input_cells = 0;
    std::size_t input_genes = 0;
    std::vector<PreprocessStep> steps;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

/// Drop genes with positive counts in fewer than `min_cells` cells. Throws `EmptyMatrix` if none survive.
CountsMatrix filter_genes(const CountsMatrix& counts, std::size_t min_cells = 10, Provenance* log = nullptr);

/// Variance-to-mean ratio of each gene's counts across cells (zero for an all-zero gene).
std::vector<double> gene_dispersions(const CountsMatrix& counts);

/**
 * Keep the `d_target` genes with the largest dispersion; ties go to the
 * lexicographically smaller gene id. Surviving genes keep their original
 * column order.
 */
CountsMatrix select_hvg(const CountsMatrix& counts, std::size_t d_target = 1000, Provenance* log = nullptr);

/**
 * @brief Ground-truth population with its raw cell frequencies.
 *
 * `frequencies[l]` is the total count of the row behind atom l. The
 * scenario holds those frequencies for the coupled and independent
 * pairings; mu is the same in every scenario.
 */
struct PopulationSpec {
    DiscreteDistribution mu;
    std::vector<double> frequencies;
    std::vector<std::string> gene_ids;
    std::vector<std::string> atom_ids;
    WeightModel scenario;
    Provenance provenance;

    /// Same population paired under another scenario.
    PopulationSpec with_scenario(WeightModel::Kind kind) const;
};

/// Normalize every row to the simplex. All-zero rows are dropped with a warning; `EmptyMatrix` if none remain.
PopulationSpec build_population(const CountsMatrix& counts, WeightModel::Kind scenario, Provenance provenance = {});

/**
 * Dense population table: header `atom,frequency,<gene ids...>`, then one
 * row per atom with its frequency and profile entries.
 */
void write_population_csv(const std::filesystem::path& path, const PopulationSpec& population);

/**
 * Load a population from an ingest directory (`population.csv` if present,
 * else `counts.mtx`), a population CSV, a counts CSV, or a `.mtx` file.
 */
PopulationSpec load_population(const std::filesystem::path& path, WeightModel::Kind scenario = WeightModel::Kind::Uniform);

} // namespace scdepth

#endif
