#include "scdepth/dimension.hpp"

#include "scdepth/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace scdepth {

namespace {

// Above this ambient dimension the spectrum is taken from the N x N Gram matrix.
constexpr std::size_t kGeneSpaceLimit = 2000;

} // namespace

std::vector<double> Spectrum::cumulative_fraction() const {
    std::vector<double> out(eigenvalues.size());
    double running = 0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        running += eigenvalues[i];
        out[i] = total_variance > 0 ? running / total_variance : 0.0;
    }
    return out;
}

std::size_t components_for_threshold(std::span<const double> eigenvalues, double total, double threshold) {
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "variance threshold must lie in (0, 1]");
    }
    if (!(total > 0.0)) {
        return 0;
    }
    // 1e-9 relative slack for eigensolver rounding.
    const double target = threshold * total - 1e-9 * total;
    double running = 0;
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        running += eigenvalues[i];
        if (running >= target) {
            return i + 1;
        }
    }
    return eigenvalues.size();
}

Eigen::MatrixXd atom_matrix(const DiscreteDistribution& mu) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(mu.dim()));
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto& a = mu.atom(i);
        const auto idx = a.indices();
        const auto val = a.values();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            M(static_cast<Eigen::Index>(i), idx[k]) = val[k];
        }
    }
    return M;
}

IntrinsicDimension pca_intrinsic_dim(const DiscreteDistribution& mu, double threshold) {
    if (mu.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "PCA needs at least two atoms");
    }
    const Eigen::MatrixXd X = atom_matrix(mu);
    Eigen::VectorXd w(static_cast<Eigen::Index>(mu.size()));
    for (std::size_t i = 0; i < mu.size(); ++i) w(static_cast<Eigen::Index>(i)) = mu.weight(i);

    const Eigen::RowVectorXd mean = w.transpose() * X;
    Eigen::MatrixXd centered = X.rowwise() - mean;
    centered.array().colwise() *= w.array().sqrt();

    Eigen::VectorXd evals;
    if (mu.dim() <= kGeneSpaceLimit) {
        const Eigen::MatrixXd cov = centered.transpose() * centered;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov, Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    } else {
        const Eigen::MatrixXd gram = centered * centered.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
        evals = solver.eigenvalues();
    }

    IntrinsicDimension out;
    out.spectrum.eigenvalues.resize(static_cast<std::size_t>(evals.size()));
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        out.spectrum.eigenvalues[static_cast<std::size_t>(i)] = std::max(0.0, evals(i));
    }
    std::sort(out.spectrum.eigenvalues.begin(), out.spectrum.eigenvalues.end(), std::greater<>());
    out.spectrum.total_variance = centered.squaredNorm();

    if (!(out.spectrum.total_variance > 0.0)) {
        out.degenerate = true;
        out.k = 0;
        return out;
    }
    out.k = components_for_threshold(out.spectrum.eigenvalues, out.spectrum.total_variance, threshold);
    return out;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ofstream os(path);
    if (!os) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    os.precision(17);
    os << "component,eigenvalue,cumulative_fraction\n";
    const auto cum = spectrum.cumulative_fraction();
    for (std::size_t i = 0; i < spectrum.eigenvalues.size(); ++i) {
        os << (i + 1) << ',' << spectrum.eigenvalues[i] << ',' << cum[i] << '\n';
    }
    if (!os) {
        throw Error(ErrorCode::Io, "failed while writing " + path.string());
    }
}

FactorPair nmf(const Eigen::MatrixXd& M, std::size_t rank, const NmfOptions& options, Rng& rng) {
    const Eigen::Index n = M.rows();
    const Eigen::Index d = M.cols();
    const auto r = static_cast<Eigen::Index>(rank);
    if (rank == 0 || r > std::min(n, d)) {
        throw Error(ErrorCode::InvalidArgument, "NMF rank must lie in [1, min(N, d)]");
    }
    if ((M.array() < 0.0).any()) {
        throw Error(ErrorCode::InvalidArgument, "NMF input must be entrywise nonnegative");
    }

    FactorPair out;
    // uniform_real on [0,1) mapped to (0,1]
    auto draw = [&rng]() { return 1.0 - rng.uniform(); };
    out.W.resize(n, r);
    out.H.resize(r, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < r; ++j) out.W(i, j) = draw();
    for (Eigen::Index i = 0; i < r; ++i)
        for (Eigen::Index j = 0; j < d; ++j) out.H(i, j) = draw();

    constexpr double tiny = std::numeric_limits<double>::min();
    auto objective = [&]() { return 0.5 * (M - out.W * out.H).squaredNorm(); };

    // Stop once the residual is at the rounding level of M.
    const double exact_fit = 0.5 * std::pow(kNmfExactRelativeError * M.norm(), 2);
    double current = objective();
    out.objective.push_back(current);
    for (std::size_t it = 0; current > exact_fit && it < options.max_iters; ++it) {
        const Eigen::MatrixXd W_prev = out.W, H_prev = out.H;

        const Eigen::MatrixXd WtM = out.W.transpose() * M;
        const Eigen::MatrixXd WtWH = (out.W.transpose() * out.W) * out.H;
        out.H.array() *= WtM.array() / (WtWH.array() + tiny);

        const Eigen::MatrixXd MHt = M * out.H.transpose();
        const Eigen::MatrixXd WHHt = out.W * (out.H * out.H.transpose());
        out.W.array() *= MHt.array() / (WHHt.array() + tiny);

        const double next = objective();
        if (next > current) {
            // A rounding-level increase at a stationary point: keep the previous factors and stop.
            out.W = W_prev;
            out.H = H_prev;
            break;
        }
        out.objective.push_back(next);
        out.iterations = it + 1;
        const double decrease = current - next;
        current = next;
        if (current <= exact_fit || decrease <= options.tol * (current + decrease)) {
            break;
        }
    }

    const double norm = M.norm();
    out.relative_error = norm > 0 ? (M - out.W * out.H).norm() / norm : 0.0;
    return out;
}

LowDimPopulation synthesize_low_dim(const DiscreteDistribution& mu, std::size_t rank, Rng& rng,
                                    const NmfOptions& options, double threshold) {
    const Eigen::MatrixXd M = atom_matrix(mu);
    const auto factors = nmf(M, rank, options, rng);
    Eigen::MatrixXd rescaled = factors.W * factors.H;

    LowDimPopulation out;
    std::vector<ExpressionProfile> atoms;
    std::vector<double> weights;
    for (Eigen::Index i = 0; i < rescaled.rows(); ++i) {
        const double total = rescaled.row(i).sum();
        if (!(total > 0.0)) {
            rescaled.row(i).setZero();
            out.warnings.push_back("row " + std::to_string(i) + " of W H vanished; dropped");
            continue;
        }
        rescaled.row(i) /= total;
        std::vector<double> dense(static_cast<std::size_t>(rescaled.cols()));
        for (Eigen::Index j = 0; j < rescaled.cols(); ++j) dense[static_cast<std::size_t>(j)] = rescaled(i, j);
        atoms.push_back(ExpressionProfile::from_dense(dense));
        weights.push_back(mu.weight(static_cast<std::size_t>(i)));
        out.kept_rows.push_back(static_cast<std::size_t>(i));
    }
    if (atoms.empty()) {
        throw Error(ErrorCode::EmptyMatrix, "every row of the factorization vanished");
    }
    const double norm = M.norm();
    out.relative_error = norm > 0 ? (rescaled - M).norm() / norm : 0.0;

    const bool uniform = mu.is_uniform();
    out.mu_k = uniform ? DiscreteDistribution::uniform(std::move(atoms))
                       : DiscreteDistribution(std::move(atoms), std::move(weights));
    out.mean_l0 = population_stats(out.mu_k).mean_l0;
    if (out.mu_k.size() >= 2) {
        auto dim = pca_intrinsic_dim(out.mu_k, threshold);
        out.k = dim.k;
        out.spectrum = std::move(dim.spectrum);
    }
    return out;
}

} // namespace scdepth
