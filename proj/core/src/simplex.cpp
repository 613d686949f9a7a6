#include "scdepth/simplex.hpp"

#include "scdepth/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace scdepth {

namespace {

void normalize_in_place(std::vector<double>& values) {
    // Two passes: the second contains the drift left by the first division.
    for (int pass = 0; pass < 2; ++pass) {
        const double total = std::accumulate(values.begin(), values.end(), 0.0);
        for (auto& v : values) {
            v /= total;
        }
    }
}

} // namespace

ExpressionProfile::ExpressionProfile(std::size_t dim, std::vector<std::uint32_t> indices, std::vector<double> values)
    : dim_(dim) {
    if (indices.size() != values.size()) {
        throw Error(ErrorCode::InvalidArgument, "profile indices and values differ in length");
    }
    indices_.reserve(indices.size());
    values_.reserve(values.size());
    for (std::size_t k = 0; k < indices.size(); ++k) {
        const double v = values[k];
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "profile entries must be finite and nonnegative");
        }
        if (indices[k] >= dim) {
            throw Error(ErrorCode::DimensionMismatch, "profile index " + std::to_string(indices[k]) +
                                                          " outside dimension " + std::to_string(dim));
        }
        if (k > 0 && indices[k] <= indices[k - 1]) {
            throw Error(ErrorCode::InvalidArgument, "profile indices must be strictly ascending");
        }
        if (v > 0.0) {
            indices_.push_back(indices[k]);
            values_.push_back(v);
        }
    }
    if (values_.empty()) {
        throw Error(ErrorCode::ZeroRow, "profile has no positive entry");
    }
    normalize_in_place(values_);
}

ExpressionProfile ExpressionProfile::from_dense(std::span<const double> dense) {
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (std::size_t j = 0; j < dense.size(); ++j) {
        if (dense[j] != 0.0) {
            idx.push_back(static_cast<std::uint32_t>(j));
            val.push_back(dense[j]);
        }
    }
    return ExpressionProfile(dense.size(), std::move(idx), std::move(val));
}

ExpressionProfile ExpressionProfile::basis(std::size_t dim, std::size_t j) {
    return ExpressionProfile(dim, {static_cast<std::uint32_t>(j)}, {1.0});
}

ExpressionProfile ExpressionProfile::uniform(std::size_t dim) {
    std::vector<std::uint32_t> idx(dim);
    std::iota(idx.begin(), idx.end(), 0u);
    return ExpressionProfile(dim, std::move(idx), std::vector<double>(dim, 1.0));
}

double ExpressionProfile::operator[](std::size_t j) const {
    auto it = std::lower_bound(indices_.begin(), indices_.end(), static_cast<std::uint32_t>(j));
    if (it == indices_.end() || *it != j) {
        return 0.0;
    }
    return values_[static_cast<std::size_t>(it - indices_.begin())];
}

std::vector<double> ExpressionProfile::to_dense() const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        out[indices_[k]] = values_[k];
    }
    return out;
}

double ExpressionProfile::squared_l2() const noexcept {
    double s = 0;
    for (double v : values_) {
        s += v * v;
    }
    return s;
}

DiscreteDistribution::DiscreteDistribution(std::vector<ExpressionProfile> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "distribution needs at least one atom");
    }
    if (atoms_.size() != weights_.size()) {
        throw Error(ErrorCode::InvalidArgument, "atom and weight counts differ");
    }
    const std::size_t d = atoms_.front().dim();
    for (const auto& a : atoms_) {
        if (a.dim() != d) {
            throw Error(ErrorCode::DimensionMismatch, "atoms have different ambient dimensions");
        }
    }
    double total = 0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::InvalidArgument, "weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "weights have zero total mass");
    }
    normalize_in_place(weights_);
}

DiscreteDistribution DiscreteDistribution::uniform(std::vector<ExpressionProfile> atoms) {
    const std::size_t n = atoms.size();
    DiscreteDistribution out(std::move(atoms), std::vector<double>(n, 1.0));
    out.uniform_ = true;
    return out;
}

ExpressionProfile normalize_counts_row(std::span<const std::uint64_t> counts) {
    std::vector<std::uint32_t> idx;
    std::vector<double> val;
    for (std::size_t j = 0; j < counts.size(); ++j) {
        if (counts[j] > 0) {
            idx.push_back(static_cast<std::uint32_t>(j));
            val.push_back(static_cast<double>(counts[j]));
        }
    }
    if (idx.empty()) {
        throw Error(ErrorCode::ZeroRow, "count row has no positive entry");
    }
    return ExpressionProfile(counts.size(), std::move(idx), std::move(val));
}

ExpressionProfile normalize_counts_row(std::size_t dim, std::span<const std::uint32_t> indices,
                                       std::span<const std::uint64_t> counts) {
    std::vector<double> val(counts.begin(), counts.end());
    if (std::none_of(val.begin(), val.end(), [](double v) { return v > 0; })) {
        throw Error(ErrorCode::ZeroRow, "count row has no positive entry");
    }
    return ExpressionProfile(dim, std::vector<std::uint32_t>(indices.begin(), indices.end()), std::move(val));
}

double lq_distance(const ExpressionProfile& a, const ExpressionProfile& b, double q) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "profiles of dimension " + std::to_string(a.dim()) + " and " +
                                                      std::to_string(b.dim()));
    }
    if (!(q >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "metric exponent q must be >= 1");
    }

    const auto ai = a.indices();
    const auto av = a.values();
    const auto bi = b.indices();
    const auto bv = b.values();

    // Merge walk over the union of supports; `visit` sees every |a_j - b_j| > 0 candidate.
    auto walk = [&](auto&& visit) {
        std::size_t x = 0, y = 0;
        while (x < ai.size() || y < bi.size()) {
            if (y == bi.size() || (x < ai.size() && ai[x] < bi[y])) {
                visit(av[x++]);
            } else if (x == ai.size() || bi[y] < ai[x]) {
                visit(bv[y++]);
            } else {
                visit(std::abs(av[x++] - bv[y++]));
            }
        }
    };

    if (std::isinf(q)) {
        double m = 0;
        walk([&](double diff) { m = std::max(m, diff); });
        return m;
    }
    if (q == 1.0) {
        double s = 0;
        walk([&](double diff) { s += diff; });
        return s;
    }
    if (q == 2.0) {
        double s = 0;
        walk([&](double diff) { s += diff * diff; });
        return std::sqrt(s);
    }
    double s = 0;
    walk([&](double diff) { s += std::pow(diff, q); });
    return std::pow(s, 1.0 / q);
}

PopulationStats population_stats(const DiscreteDistribution& mu) {
    if (mu.empty()) {
        throw Error(ErrorCode::InvalidArgument, "population_stats needs a nonempty distribution");
    }
    PopulationStats out;
    out.ambient_dim = mu.dim();
    out.atom_count = mu.size();
    for (std::size_t i = 0; i < mu.size(); ++i) {
        out.mean_l0 += mu.weight(i) * static_cast<double>(mu.atom(i).nnz());
        out.mean_sq_l2 += mu.weight(i) * mu.atom(i).squared_l2();
    }
    return out;
}

} // namespace scdepth
