#include "oracles.hpp"

#include "scdepth/dimension.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace scdepth;
using oracle::code_of;

namespace {

std::vector<std::vector<double>> orthogonal_directions(std::size_t count, std::size_t d) {
    // Disjoint pairs (+1 at 2j, -1 at 2j+1) are orthogonal and sum to zero.
    std::vector<std::vector<double>> dirs(count, std::vector<double>(d, 0.0));
    for (std::size_t j = 0; j < count; ++j) {
        dirs[j][2 * j] = 1.0;
        dirs[j][2 * j + 1] = -1.0;
    }
    return dirs;
}

} // namespace

TEST(ComponentsForThreshold, InclusiveCount) {
    const std::vector<double> ev{0.95, 0.05};
    EXPECT_EQ(components_for_threshold(ev, 1.0, 0.95), 1u);
    EXPECT_EQ(components_for_threshold(ev, 1.0, 0.96), 2u);
    EXPECT_EQ(components_for_threshold(ev, 1.0, 1.0), 2u);
    EXPECT_EQ(components_for_threshold(ev, 0.0, 0.95), 0u);
    EXPECT_EQ(code_of([&] { components_for_threshold(ev, 1.0, 0.0); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { components_for_threshold(ev, 1.0, 1.5); }), ErrorCode::InvalidArgument);
}

TEST(PcaIntrinsicDim, PlaneInTenDimensions) {
    Rng rng(1);
    const std::vector<double> base(10, 0.1);
    const auto atoms = oracle::affine_patch(200, base, orthogonal_directions(2, 10), 0.05, rng);
    const auto r = pca_intrinsic_dim(DiscreteDistribution::uniform(atoms));
    EXPECT_EQ(r.k, 2u);
    EXPECT_FALSE(r.degenerate);
}

TEST(PcaIntrinsicDim, DominantDirection) {
    Rng rng(2);
    std::vector<ExpressionProfile> atoms;
    // Variance split 0.95 : 0.05 along two orthogonal directions with symmetric values.
    const double a = std::sqrt(0.95) * 0.1, b = std::sqrt(0.05) * 0.1;
    for (double sa : {-1.0, 1.0}) {
        for (double sb : {-1.0, 1.0}) {
            std::vector<double> x{0.25 + sa * a, 0.25 - sa * a, 0.25 + sb * b, 0.25 - sb * b};
            atoms.push_back(ExpressionProfile::from_dense(x));
        }
    }
    const auto r = pca_intrinsic_dim(DiscreteDistribution::uniform(atoms));
    EXPECT_EQ(r.k, 1u);
    ASSERT_GE(r.spectrum.eigenvalues.size(), 2u);
    EXPECT_NEAR(r.spectrum.eigenvalues[0] / r.spectrum.total_variance, 0.95, 1e-9);
}

TEST(PcaIntrinsicDim, PermutationAndDuplicationInvariant) {
    Rng rng(3);
    const auto atoms = oracle::affine_patch(60, std::vector<double>(12, 1.0 / 12), orthogonal_directions(3, 12), 0.03, rng);
    const auto base = pca_intrinsic_dim(DiscreteDistribution::uniform(atoms));
    auto shuffled = atoms;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    auto doubled = atoms;
    doubled.insert(doubled.end(), atoms.begin(), atoms.end());
    const auto s = pca_intrinsic_dim(DiscreteDistribution::uniform(shuffled));
    const auto dd = pca_intrinsic_dim(DiscreteDistribution::uniform(doubled));
    EXPECT_EQ(base.k, 3u);
    EXPECT_EQ(s.k, base.k);
    EXPECT_EQ(dd.k, base.k);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_NEAR(s.spectrum.eigenvalues[i], base.spectrum.eigenvalues[i], 1e-12);
        EXPECT_NEAR(dd.spectrum.eigenvalues[i], base.spectrum.eigenvalues[i], 1e-12);
    }
}

TEST(PcaIntrinsicDim, SpectrumOrderedAndSumsToTotal) {
    Rng rng(4);
    const auto mu = DiscreteDistribution(oracle::random_profiles(40, 15, rng, 0.4), std::vector<double>(40, 1.0));
    const auto r = pca_intrinsic_dim(mu);
    const auto& ev = r.spectrum.eigenvalues;
    EXPECT_TRUE(std::is_sorted(ev.rbegin(), ev.rend()));
    double sum = 0;
    for (double v : ev) {
        EXPECT_GE(v, 0.0);
        sum += v;
    }
    EXPECT_NEAR(sum, r.spectrum.total_variance, 1e-10);
    const auto cum = r.spectrum.cumulative_fraction();
    EXPECT_NEAR(cum.back(), 1.0, 1e-10);
    EXPECT_GE(r.k, 1u);
    EXPECT_LE(r.k, 15u);
}

TEST(PcaIntrinsicDim, DegenerateAndTooSmall) {
    const auto same = DiscreteDistribution::uniform({ExpressionProfile::uniform(5), ExpressionProfile::uniform(5)});
    const auto r = pca_intrinsic_dim(same);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.k, 0u);
    const auto one = DiscreteDistribution::uniform({ExpressionProfile::uniform(5)});
    EXPECT_EQ(code_of([&] { pca_intrinsic_dim(one); }), ErrorCode::InsufficientData);
}

TEST(SpectrumCsv, WritesRows) {
    const auto dir = std::filesystem::temp_directory_path() / "scdepth_spectrum_test";
    std::filesystem::create_directories(dir);
    Spectrum s{{3.0, 1.0}, 4.0};
    write_spectrum_csv(dir / "s.csv", s);
    std::ifstream in(dir / "s.csv");
    std::string header, first, second;
    std::getline(in, header), std::getline(in, first), std::getline(in, second);
    EXPECT_EQ(header, "component,eigenvalue,cumulative_fraction");
    EXPECT_EQ(first.substr(0, 2), "1,");
    EXPECT_EQ(second.substr(0, 2), "2,");
    std::filesystem::remove_all(dir);
}

TEST(Nmf, RecoversRankOne) {
    Rng rng(5);
    Eigen::VectorXd w = Eigen::VectorXd::Random(30).cwiseAbs().array() + 0.1;
    Eigen::VectorXd h = Eigen::VectorXd::Random(12).cwiseAbs().array() + 0.1;
    const Eigen::MatrixXd M = w * h.transpose();
    const auto f = nmf(M, 1, {2000, 1e-12}, rng);
    EXPECT_LE(f.relative_error, 1e-2);
    EXPECT_GE(f.W.minCoeff(), 0.0);
    EXPECT_GE(f.H.minCoeff(), 0.0);
}

TEST(Nmf, ObjectiveNonIncreasing) {
    Rng rng(6);
    Eigen::MatrixXd M = Eigen::MatrixXd::Random(40, 25).cwiseAbs();
    for (std::size_t r : {1u, 3u, 8u}) {
        const auto f = nmf(M, r, {300, 0.0}, rng);
        ASSERT_EQ(f.objective.size(), f.iterations + 1);
        for (std::size_t i = 1; i < f.objective.size(); ++i) {
            EXPECT_LE(f.objective[i], f.objective[i - 1]) << "rank " << r << " iter " << i;
        }
    }
}

TEST(Nmf, RejectsBadInput) {
    Rng rng(7);
    Eigen::MatrixXd M = Eigen::MatrixXd::Ones(3, 4);
    EXPECT_EQ(code_of([&] { nmf(M, 0, {}, rng); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([&] { nmf(M, 4, {}, rng); }), ErrorCode::InvalidArgument);
    M(0, 0) = -1;
    EXPECT_EQ(code_of([&] { nmf(M, 1, {}, rng); }), ErrorCode::InvalidArgument);
}

TEST(SynthesizeLowDim, AtomsOnSimplexAndDimensionAtMostRank) {
    Rng rng(8);
    const auto mu = DiscreteDistribution::uniform(oracle::random_profiles(80, 20, rng, 0.3));
    for (std::size_t r : {2u, 4u}) {
        const auto low = synthesize_low_dim(mu, r, rng);
        EXPECT_LE(low.k, r);
        EXPECT_EQ(low.mu_k.size(), low.kept_rows.size());
        for (const auto& a : low.mu_k.atoms()) {
            double s = 0;
            for (double v : a.values()) {
                EXPECT_GE(v, 0.0);
                s += v;
            }
            EXPECT_NEAR(s, 1.0, kProfileSumTolerance);
        }
    }
}

TEST(SynthesizeLowDim, FullRankReproducesPopulation) {
    Rng rng(9);
    const auto mu = DiscreteDistribution::uniform(oracle::random_profiles(6, 5, rng));
    const auto low = synthesize_low_dim(mu, 5, rng, {5000, 1e-14});
    EXPECT_LT(low.relative_error, 1e-2);
}

TEST(SynthesizeLowDim, RecoversLowRankPopulation) {
    Rng rng(10);
    const auto mu = oracle::simplex_mixture_population(300, 4, 3, rng);
    const auto low = synthesize_low_dim(mu, 4, rng, {3000, 1e-12});
    EXPECT_LT(low.relative_error, 5e-2);
    EXPECT_EQ(low.k, pca_intrinsic_dim(mu).k);
}
