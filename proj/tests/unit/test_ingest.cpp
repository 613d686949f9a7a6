#include "oracles.hpp"

#include "scdepth/ingest.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>

using namespace scdepth;
using oracle::code_of;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        path_ = fs::temp_directory_path() /
                ("scdepth_ingest_" + std::string(info->test_suite_name()) + "_" + info->name() + "_" +
                 std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path_ / name) << text;
        return path_ / name;
    }

private:
    static inline std::uint64_t counter_ = 0;
    fs::path path_;
};

CountsMatrix from_dense(const std::vector<std::vector<std::uint64_t>>& rows, std::vector<std::string> genes) {
    CountsMatrix m;
    m.gene_ids = std::move(genes);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CountsMatrix::Row r;
        for (std::uint32_t j = 0; j < rows[i].size(); ++j) {
            if (rows[i][j] > 0) r.genes.push_back(j), r.counts.push_back(rows[i][j]);
        }
        m.rows.push_back(std::move(r));
        m.cell_ids.push_back("c" + std::to_string(i));
    }
    return m;
}

std::vector<std::vector<std::uint64_t>> to_dense(const CountsMatrix& m) {
    std::vector<std::vector<std::uint64_t>> out(m.cells(), std::vector<std::uint64_t>(m.genes(), 0));
    for (std::size_t i = 0; i < m.cells(); ++i) {
        for (std::size_t k = 0; k < m.rows[i].genes.size(); ++k) out[i][m.rows[i].genes[k]] = m.rows[i].counts[k];
    }
    return out;
}

const std::string kToyCsv = "cell,g1,g2,g3\nc1,1,0,2\nc2,0,0,5\n";

} // namespace

TEST(ReadCounts, CsvToy) {
    TempDir dir;
    const auto m = read_counts(dir.write("toy.csv", kToyCsv), CountsFormat::Csv);
    EXPECT_EQ(m.cells(), 2u);
    EXPECT_EQ(m.genes(), 3u);
    EXPECT_EQ(m.gene_ids, (std::vector<std::string>{"g1", "g2", "g3"}));
    EXPECT_EQ(m.cell_ids, (std::vector<std::string>{"c1", "c2"}));
    EXPECT_EQ(to_dense(m), (std::vector<std::vector<std::uint64_t>>{{1, 0, 2}, {0, 0, 5}}));
    EXPECT_EQ(m.row_total(1), 5u);
}

TEST(ReadCounts, CsvHeaderWithoutCornerLabel) {
    TempDir dir;
    const auto m = read_counts(dir.write("toy.csv", "g1,g2,g3\nc1,1,0,2\nc2,0,0,5\n"), CountsFormat::Csv);
    EXPECT_EQ(m.gene_ids, (std::vector<std::string>{"g1", "g2", "g3"}));
    EXPECT_EQ(to_dense(m), (std::vector<std::vector<std::uint64_t>>{{1, 0, 2}, {0, 0, 5}}));
}

TEST(ReadCounts, MatrixMarketMatchesCsv) {
    TempDir dir;
    const auto csv = read_counts(dir.write("toy.csv", kToyCsv), CountsFormat::Csv);
    dir.write("genes.tsv", "g1\ng2\ng3\n");
    dir.write("cells.tsv", "c1\nc2\n");
    const auto mtx = read_counts(dir.write("counts.mtx", "%%MatrixMarket matrix coordinate integer general\n"
                                                         "% toy\n"
                                                         "2 3 4\n"
                                                         "1 1 1\n"
                                                         "1 3 1\n"
                                                         "2 3 5\n"
                                                         "1 3 1\n"),
                                 CountsFormat::MatrixMarket);
    EXPECT_EQ(to_dense(mtx), to_dense(csv));
    EXPECT_EQ(mtx.gene_ids, csv.gene_ids);
    EXPECT_EQ(mtx.cell_ids, csv.cell_ids);
}

TEST(ReadCounts, MatrixMarketDefaultIdsAndRoundTrip) {
    TempDir dir;
    const auto m = read_counts(dir.write("x.mtx", "%%MatrixMarket matrix coordinate integer general\n2 2 1\n2 1 7\n"),
                               CountsFormat::MatrixMarket);
    EXPECT_EQ(m.gene_ids, (std::vector<std::string>{"gene_1", "gene_2"}));
    EXPECT_EQ(m.cell_ids, (std::vector<std::string>{"cell_1", "cell_2"}));
    const auto out = dir.path() / "out";
    write_counts(out, m);
    const auto back = read_counts(out / "counts.mtx", CountsFormat::MatrixMarket);
    EXPECT_EQ(to_dense(back), to_dense(m));
    EXPECT_EQ(back.gene_ids, m.gene_ids);
}

TEST(ReadCounts, NegativeEntryReportsLine) {
    TempDir dir;
    try {
        read_counts(dir.write("bad.csv", "cell,g1,g2\nc1,1,2\nc2,-1,0\n"), CountsFormat::Csv);
        FAIL() << "expected ParseError";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
    }
    EXPECT_EQ(code_of([&] { read_counts(dir.write("bad2.csv", "cell,g1\nc1,1.5\n"), CountsFormat::Csv); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { read_counts(dir.write("short.csv", "cell,g1,g2\nc1,1\n"), CountsFormat::Csv); }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] {
                  read_counts(dir.write("bad.mtx", "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n"),
                              CountsFormat::MatrixMarket);
              }),
              ErrorCode::ParseError);
    EXPECT_EQ(code_of([&] { read_counts(dir.path() / "missing.csv", CountsFormat::Csv); }), ErrorCode::Io);
}

TEST(CountsFormat, ParseAndInfer) {
    EXPECT_EQ(parse_counts_format("csv"), CountsFormat::Csv);
    EXPECT_EQ(parse_counts_format("mtx"), CountsFormat::MatrixMarket);
    EXPECT_EQ(infer_counts_format("a/b/matrix.mtx"), CountsFormat::MatrixMarket);
    EXPECT_EQ(infer_counts_format("a/b/matrix.csv"), CountsFormat::Csv);
    EXPECT_EQ(code_of([] { parse_counts_format("h5ad"); }), ErrorCode::InvalidArgument);
}

TEST(FilterGenes, NineVersusTenCells) {
    std::vector<std::vector<std::uint64_t>> rows(12, std::vector<std::uint64_t>(2, 0));
    for (std::size_t i = 0; i < 9; ++i) rows[i][0] = 1;
    for (std::size_t i = 0; i < 10; ++i) rows[i][1] = 2;
    Provenance prov;
    const auto out = filter_genes(from_dense(rows, {"A", "B"}), 10, &prov);
    EXPECT_EQ(out.gene_ids, std::vector<std::string>{"B"});
    EXPECT_EQ(out.cells(), 12u);
    EXPECT_EQ(prov.steps.size(), 1u);
}

TEST(FilterGenes, IdentityAndEmpty) {
    const auto m = from_dense({{1, 2}, {0, 3}}, {"a", "b"});
    EXPECT_EQ(to_dense(filter_genes(m, 1)), to_dense(m));
    EXPECT_EQ(code_of([&] { filter_genes(m, 5); }), ErrorCode::EmptyMatrix);
    const auto with_zero = from_dense({{1, 0}, {2, 0}}, {"a", "b"});
    EXPECT_EQ(filter_genes(with_zero, 1).gene_ids, std::vector<std::string>{"a"});
}

TEST(SelectHvg, DispersionsAndTieRule) {
    // Dispersions (sample variance / mean): [0,5] -> 5, [0,2] -> 2, [2,0] -> 2, [3,3] -> 0.
    const auto m = from_dense({{0, 0, 2, 3}, {5, 2, 0, 3}}, {"g5", "zeta", "alpha", "flat"});
    const auto disp = gene_dispersions(m);
    EXPECT_DOUBLE_EQ(disp[0], 5.0);
    EXPECT_DOUBLE_EQ(disp[1], 2.0);
    EXPECT_DOUBLE_EQ(disp[2], 2.0);
    EXPECT_DOUBLE_EQ(disp[3], 0.0);
    EXPECT_EQ(select_hvg(m, 2).gene_ids, (std::vector<std::string>{"g5", "alpha"}));
    EXPECT_EQ(select_hvg(m, 3).gene_ids, (std::vector<std::string>{"g5", "zeta", "alpha"}));
    EXPECT_EQ(to_dense(select_hvg(m, 4)), to_dense(m));
}

TEST(SelectHvg, ClampsTargetWithWarning) {
    const auto m = from_dense({{1, 2}, {3, 0}}, {"a", "b"});
    Provenance prov;
    EXPECT_EQ(select_hvg(m, 1000, &prov).genes(), 2u);
    EXPECT_FALSE(prov.warnings.empty());
    const auto j = nlohmann::json::parse(prov.to_json());
    EXPECT_TRUE(j.contains("steps"));
    EXPECT_TRUE(j.contains("warnings"));
}

TEST(BuildPopulation, SingleRow) {
    const auto m = from_dense({{2, 2}}, {"a", "b"});
    const auto pop = build_population(m, WeightModel::Kind::Coupled);
    ASSERT_EQ(pop.mu.size(), 1u);
    EXPECT_EQ(pop.mu.atom(0), ExpressionProfile::from_dense(std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(pop.scenario.kind, WeightModel::Kind::Coupled);
    EXPECT_EQ(pop.scenario.frequencies, std::vector<double>{4.0});
}

TEST(BuildPopulation, ScenarioDoesNotChangeMu) {
    const auto m = from_dense({{1, 0, 2}, {0, 0, 5}, {4, 4, 0}}, {"a", "b", "c"});
    const auto uni = build_population(m, WeightModel::Kind::Uniform);
    const auto cpl = uni.with_scenario(WeightModel::Kind::Coupled);
    const auto ind = build_population(m, WeightModel::Kind::Independent);
    EXPECT_EQ(uni.mu.atoms(), cpl.mu.atoms());
    EXPECT_EQ(uni.mu.atoms(), ind.mu.atoms());
    EXPECT_EQ(uni.mu.weights(), ind.mu.weights());
    EXPECT_TRUE(uni.mu.is_uniform());
    EXPECT_EQ(cpl.scenario.frequencies, (std::vector<double>{3, 5, 8}));
}

TEST(BuildPopulation, DropsZeroRows) {
    const auto m = from_dense({{1, 0}, {0, 0}, {0, 3}}, {"a", "b"});
    const auto pop = build_population(m, WeightModel::Kind::Uniform);
    EXPECT_EQ(pop.mu.size(), 2u);
    EXPECT_EQ(pop.atom_ids, (std::vector<std::string>{"c0", "c2"}));
    EXPECT_FALSE(pop.provenance.warnings.empty());
    EXPECT_EQ(code_of([] { build_population(from_dense({{0, 0}}, {"a", "b"}), WeightModel::Kind::Uniform); }),
              ErrorCode::EmptyMatrix);
}

TEST(LoadPopulation, AllInputShapesAgree) {
    TempDir dir;
    const auto csv = dir.write("toy.csv", kToyCsv);
    const auto from_csv = load_population(csv);
    const auto counts = read_counts(csv, CountsFormat::Csv);

    write_counts(dir.path() / "ingest", counts);
    const auto from_dir = load_population(dir.path() / "ingest");
    const auto from_mtx = load_population(dir.path() / "ingest" / "counts.mtx");

    write_population_csv(dir.path() / "ingest" / "population.csv", from_csv);
    const auto from_pop = load_population(dir.path() / "ingest" / "population.csv", WeightModel::Kind::Coupled);
    const auto from_dir_pop = load_population(dir.path() / "ingest");

    for (const auto* p : {&from_dir, &from_mtx, &from_pop, &from_dir_pop}) {
        ASSERT_EQ(p->mu.size(), 2u);
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(p->mu.atom(i)[j], from_csv.mu.atom(i)[j], 1e-15);
        }
        EXPECT_EQ(p->gene_ids, from_csv.gene_ids);
    }
    EXPECT_EQ(from_pop.scenario.frequencies, (std::vector<double>{3, 5}));
}
