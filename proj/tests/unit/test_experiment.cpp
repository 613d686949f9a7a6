#include "oracles.hpp"

#include "scdepth/allocation.hpp"
#include "scdepth/experiment.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace scdepth;
using oracle::code_of;
namespace fs = std::filesystem;

namespace {

PopulationSpec population_of(DiscreteDistribution mu) {
    PopulationSpec pop;
    pop.mu = std::move(mu);
    pop.frequencies.assign(pop.mu.size(), 1.0);
    for (std::size_t j = 0; j < pop.mu.dim(); ++j) pop.gene_ids.push_back("g" + std::to_string(j));
    for (std::size_t i = 0; i < pop.mu.size(); ++i) pop.atom_ids.push_back("a" + std::to_string(i));
    return pop;
}

PopulationSpec random_population(std::size_t atoms, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    return population_of(DiscreteDistribution::uniform(oracle::random_profiles(atoms, d, rng, 0.3)));
}

SweepResult synthetic_result(const std::vector<std::uint64_t>& ms, const std::vector<std::size_t>& ns,
                             const std::vector<std::vector<double>>& means) {
    SweepResult r;
    r.config.m_grid = ms;
    r.config.n_grid = ns;
    for (std::size_t mi = 0; mi < ms.size(); ++mi) {
        for (std::size_t ni = 0; ni < ns.size(); ++ni) {
            CellResult c;
            c.m = ms[mi], c.n = ns[ni], c.mean_W = means[mi][ni];
            r.cells.push_back(c);
        }
    }
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ScratchDir {
    fs::path path;
    explicit ScratchDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~ScratchDir() { fs::remove_all(path); }
};

} // namespace

TEST(RunTrial, PointMassWithMatchingUnseenProfileIsExact) {
    const auto e = ExpressionProfile::basis(5, 2);
    const auto pop = population_of(DiscreteDistribution::uniform({e}));
    SweepConfig cfg;
    cfg.unseen_policy = UnseenPolicy::Kind::Fixed;
    cfg.unseen_profile = e;
    for (std::uint64_t m : {0u, 3u, 500u}) {
        for (std::size_t n : {1u, 4u}) {
            const auto cell = run_cell(pop, m, n, cfg);
            EXPECT_EQ(cell.mean_W, 0.0);
            EXPECT_EQ(cell.std_W, 0.0);
        }
    }
}

TEST(RunTrial, ZeroBudgetUniformFallback) {
    const auto pop = population_of(DiscreteDistribution::uniform({ExpressionProfile::basis(2, 0)}));
    SweepConfig cfg;
    cfg.p = 1, cfg.q = 1;
    cfg.trials = 5;
    const auto cell = run_cell(pop, 0, 3, cfg);
    for (const auto& t : cell.trials) {
        EXPECT_DOUBLE_EQ(t.w_noisy_vs_mu, 1.0);
        EXPECT_DOUBLE_EQ(t.w_noisy_vs_mun, 1.0);
        EXPECT_DOUBLE_EQ(t.w_mun_vs_mu, 0.0);
    }
}

TEST(RunTrial, TwoAtomUpperBound) {
    const auto pop =
        population_of(DiscreteDistribution::uniform({ExpressionProfile::from_dense(std::vector<double>{0.5, 0.5, 0, 0}),
                                                      ExpressionProfile::from_dense(std::vector<double>{0, 0.2, 0.3, 0.5})}));
    SweepConfig cfg;
    cfg.trials = 10;
    cfg.master_seed = 4;
    const auto cell = run_cell(pop, 1000, 2, cfg);
    double mean = 0;
    for (const auto& t : cell.trials) mean += t.w_noisy_vs_mun;
    mean /= double(cell.trials.size());
    AllocationParams params;
    params.mean_l0 = population_stats(pop.mu).mean_l0;
    EXPECT_LE(mean, expected_error_upper(2, 1000, params));
}

TEST(RunTrial, ConvexityHoldsInEveryTrial) {
    const auto pop = random_population(30, 12, 5);
    for (double p : {1.0, 2.0}) {
        SweepConfig cfg;
        cfg.p = p;
        cfg.trials = 20;
        for (std::uint64_t m : {5u, 100u, 5000u}) {
            const auto cell = run_cell(pop, m, 8, cfg);
            EXPECT_EQ(convexity_violations(cell), 0u);
            for (const auto& t : cell.trials) EXPECT_LE(t.convexity_lhs, t.convexity_rhs + kConvexitySlack);
        }
    }
}

TEST(TrialSeed, KeyedOnGridPoint) {
    EXPECT_EQ(trial_seed(1, 100, 5, 0), trial_seed(1, 100, 5, 0));
    EXPECT_NE(trial_seed(1, 100, 5, 0), trial_seed(1, 100, 5, 1));
    EXPECT_NE(trial_seed(1, 100, 5, 0), trial_seed(1, 5, 100, 0));
    EXPECT_NE(trial_seed(1, 100, 5, 0), trial_seed(2, 100, 5, 0));
}

TEST(Sweep, SingleCellGrid) {
    const auto pop = random_population(10, 6, 6);
    SweepConfig cfg;
    cfg.m_grid = {200};
    cfg.n_grid = {4};
    cfg.trials = 3;
    const auto r = sweep(pop, cfg);
    ASSERT_EQ(r.cells.size(), 1u);
    ASSERT_EQ(r.n_star.size(), 1u);
    EXPECT_EQ(r.n_star[0].n_star, 4u);
    EXPECT_EQ(r.cells[0].trials.size(), 3u);
}

TEST(Sweep, IndependentOfOrderAndWorkers) {
    const auto pop = random_population(25, 8, 7);
    SweepConfig cfg;
    cfg.m_grid = {50, 400, 3000};
    cfg.n_grid = {2, 6, 15};
    cfg.trials = 4;
    cfg.master_seed = 99;
    const auto base = sweep(pop, cfg);

    // Running single grid points reproduces the corresponding cell exactly.
    for (std::size_t mi = 0; mi < 3; ++mi) {
        for (std::size_t ni = 0; ni < 3; ++ni) {
            SweepConfig one = cfg;
            one.m_grid = {cfg.m_grid[mi]};
            one.n_grid = {cfg.n_grid[ni]};
            one.workers = 1 + (mi + ni) % 3;
            const auto single = sweep(pop, one);
            const auto& a = single.cells[0];
            const auto& b = base.at(mi, ni);
            ASSERT_EQ(a.trials.size(), b.trials.size());
            for (std::size_t t = 0; t < a.trials.size(); ++t) {
                EXPECT_EQ(a.trials[t].w_noisy_vs_mu, b.trials[t].w_noisy_vs_mu);
                EXPECT_EQ(a.trials[t].w_noisy_vs_mun, b.trials[t].w_noisy_vs_mun);
            }
        }
    }
    SweepConfig threaded = cfg;
    threaded.workers = 4;
    const auto par = sweep(pop, threaded);
    for (std::size_t i = 0; i < base.cells.size(); ++i) {
        EXPECT_EQ(par.cells[i].mean_W, base.cells[i].mean_W);
        EXPECT_EQ(par.cells[i].std_W, base.cells[i].std_W);
    }
}

TEST(Sweep, ErrorFirstDecreasesThenIncreasesInCells) {
    Rng rng(8);
    const auto pop = population_of(oracle::simplex_mixture_population(400, 8, 5, rng));
    SweepConfig cfg;
    cfg.m_grid = {20000};
    cfg.n_grid = {3, 60, 2000};
    cfg.trials = 3;
    cfg.record_population_error = false;
    const auto r = sweep(pop, cfg);
    EXPECT_GT(r.at(0, 0).mean_W, r.at(0, 1).mean_W);
    EXPECT_LT(r.at(0, 1).mean_W, r.at(0, 2).mean_W);
    EXPECT_FALSE(r.n_star[0].boundary);
}

TEST(SweepConfig, Validation) {
    auto invalid = [](auto mutate) {
        SweepConfig c;
        c.m_grid = {10, 20};
        c.n_grid = {1, 2};
        mutate(c);
        return code_of([&] { c.validate(); });
    };
    EXPECT_EQ(invalid([](SweepConfig& c) { c.m_grid.clear(); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(invalid([](SweepConfig& c) { c.n_grid = {2, 2}; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(invalid([](SweepConfig& c) { c.n_grid = {0, 2}; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(invalid([](SweepConfig& c) { c.trials = 0; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(invalid([](SweepConfig& c) { c.p = 0.5; }), ErrorCode::InvalidArgument);
    EXPECT_EQ(invalid([](SweepConfig& c) { c.unseen_policy = UnseenPolicy::Kind::Fixed; }), ErrorCode::InvalidArgument);
}

TEST(LogGrid, EndpointsAndDeduplication) {
    const auto g = log_grid(1e3, 1e7, 9);
    ASSERT_EQ(g.size(), 9u);
    EXPECT_EQ(g.front(), 1000u);
    EXPECT_EQ(g.back(), 10000000u);
    EXPECT_EQ(g[4], 100000u);
    const auto small = log_grid(1, 3, 10);
    EXPECT_EQ(small, (std::vector<std::uint64_t>{1, 2, 3}));
}

TEST(FindOptimalN, Rules) {
    const auto r = synthetic_result({10, 20, 30}, {1, 2, 4, 8},
                                    {{4, 1, 2, 3}, {5, 5, 5, 5}, {4, 3, 2, 1}});
    const auto ns = find_optimal_n(r);
    ASSERT_EQ(ns.size(), 3u);
    EXPECT_EQ(ns[0].n_star, 2u);
    EXPECT_FALSE(ns[0].boundary);
    EXPECT_EQ(ns[1].n_star, 1u);
    EXPECT_TRUE(ns[1].boundary);
    EXPECT_EQ(ns[2].n_star, 8u);
    EXPECT_TRUE(ns[2].boundary);
}

TEST(FindOptimalN, SkipsFailedCells) {
    auto r = synthetic_result({10}, {1, 2, 4, 8}, {{9, 3, 1, 2}});
    r.cells[2].error = "too large";
    r.cells[2].mean_W = std::nan("");
    const auto ns = find_optimal_n(r);
    EXPECT_EQ(ns[0].n_star, 8u);
    EXPECT_TRUE(ns[0].boundary);
}

TEST(FitSlope, ExactLineAndInsufficientData) {
    std::vector<NStar> pts;
    for (double m : {1e3, 1e4, 1e5, 1e6}) pts.push_back({std::uint64_t(m), std::size_t(std::llround(std::pow(m, 0.8))), false, 0});
    const auto fit = fit_slope(pts);
    EXPECT_NEAR(fit.slope, 0.8, 1e-3);
    EXPECT_NEAR(fit.r2, 1.0, 1e-6);
    EXPECT_EQ(fit.points, 4u);
    pts[0].boundary = pts[1].boundary = pts[2].boundary = true;
    EXPECT_EQ(code_of([&] { fit_slope(pts); }), ErrorCode::InsufficientData);
    EXPECT_NEAR(1 - 2.0 / 9.0, 0.778, 1e-3);
}

TEST(LowerEnvelope, PairPopulation) {
    const auto pop = population_of(oracle::pair_population(10));
    SweepConfig cfg;
    cfg.m_grid = {300, 1000};
    cfg.n_grid = {10, 20};
    cfg.trials = 20;
    cfg.q = 1;
    cfg.record_population_error = false;
    const auto r = sweep(pop, cfg);
    const auto checks = lower_envelope(r, 0.5);
    EXPECT_FALSE(checks.empty());
    for (const auto& c : checks) EXPECT_TRUE(c.satisfied) << c.m << "," << c.n;
    SweepResult other = r;
    other.config.q = 3;
    EXPECT_EQ(code_of([&] { lower_envelope(other, 0.5); }), ErrorCode::InvalidArgument);
}

TEST(EmitOutputs, CsvRoundTripAndSvg) {
    ScratchDir dir("scdepth_emit_test");
    const auto pop = random_population(15, 6, 9);
    SweepConfig cfg;
    cfg.m_grid = {100, 1000};
    cfg.n_grid = {2, 5, 9};
    cfg.trials = 3;
    const auto r = sweep(pop, cfg);
    emit_outputs(r, dir.path);

    const auto summary = read_summary_csv(dir.path / "summary.csv");
    ASSERT_EQ(summary.size(), r.cells.size());
    for (std::size_t i = 0; i < summary.size(); ++i) {
        EXPECT_EQ(summary[i].m, r.cells[i].m);
        EXPECT_EQ(summary[i].n, r.cells[i].n);
        EXPECT_EQ(summary[i].mean_W, r.cells[i].mean_W);
        EXPECT_EQ(summary[i].std_W, r.cells[i].std_W);
    }
    const auto rows = read_results_csv(dir.path / "results.csv");
    ASSERT_EQ(rows.size(), 2u * 3u * 3u);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto& cell = r.cells[i / 3];
        EXPECT_EQ(row.m, cell.m);
        EXPECT_EQ(row.n, cell.n);
        const auto& rec = cell.trials[row.trial];
        EXPECT_EQ(row.record.w_noisy_vs_mu, rec.w_noisy_vs_mu);
        EXPECT_EQ(row.record.w_noisy_vs_mun, rec.w_noisy_vs_mun);
        EXPECT_EQ(row.record.w_mun_vs_mu, rec.w_mun_vs_mu);
    }

    std::ifstream nstar(dir.path / "nstar.csv");
    std::string header;
    std::getline(nstar, header);
    EXPECT_EQ(header, "m,n_star,boundary_flag");

    for (const char* svg : {"nstar.svg", "error_curves.svg"}) {
        boost::property_tree::ptree tree;
        ASSERT_NO_THROW(boost::property_tree::read_xml((dir.path / svg).string(), tree)) << svg;
        ASSERT_EQ(tree.size(), 1u) << svg;
        EXPECT_EQ(tree.begin()->first, "svg");
        EXPECT_EQ(tree.get<std::string>("svg.<xmlattr>.width"), "640");
    }
}

TEST(EmitOutputs, TheoryColumnWhenConfigured) {
    ScratchDir dir("scdepth_emit_theory_test");
    auto r = synthetic_result({1000, 10000}, {1, 2, 4}, {{3, 1, 2}, {3, 2, 1}});
    r.n_star = find_optimal_n(r);
    AllocationParams theory;
    theory.k = 7;
    theory.mean_l0 = 10;
    r.config.theory = theory;
    emit_outputs(r, dir.path, {800, 600});
    std::ifstream nstar(dir.path / "nstar.csv");
    std::string header, row;
    std::getline(nstar, header);
    std::getline(nstar, row);
    EXPECT_EQ(header, "m,n_star,boundary_flag,theory_n");
    EXPECT_EQ(row.substr(0, row.rfind(',') + 1), "1000,2,0,");
    EXPECT_NE(slurp(dir.path / "nstar.svg").find("width=\"800\""), std::string::npos);
}

TEST(FormatDouble, ShortestRoundTrip) {
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(std::nan("")), "nan");
    const double x = 0.123456789012345678;
    EXPECT_EQ(std::stod(format_double(x)), x);
}
