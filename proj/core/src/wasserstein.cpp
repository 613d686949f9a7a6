#include "scdepth/wasserstein.hpp"

#include "network_simplex.hpp"
#include "scdepth/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace scdepth {

namespace {

bool all_equal(std::span<const double> w) {
    return std::adjacent_find(w.begin(), w.end(), std::not_equal_to<>()) == w.end();
}

// Largest-remainder rounding of w / sum(w) onto integers summing to `total`.
std::vector<std::int64_t> to_grid(std::span<const double> w, std::int64_t total) {
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<std::int64_t> out(w.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    remainders.reserve(w.size());
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double exact = w[i] / sum * static_cast<double>(total);
        const double floor = std::floor(exact);
        out[i] = static_cast<std::int64_t>(floor);
        assigned += out[i];
        remainders.emplace_back(exact - floor, i);
    }
    std::int64_t left = total - assigned;
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t k = 0; left > 0; k = (k + 1) % remainders.size(), --left) {
        ++out[remainders[k].second];
    }
    for (std::size_t k = remainders.size(); left < 0; --left) {
        // Float rounding overshot; take units back from the smallest remainders that can spare them.
        do {
            k = (k == 0 ? remainders.size() : k) - 1;
        } while (out[remainders[k].second] == 0);
        --out[remainders[k].second];
    }
    return out;
}

void check_weights(std::span<const double> w, const char* which) {
    if (w.empty()) {
        throw Error(ErrorCode::InvalidArgument, std::string(which) + " marginal is empty");
    }
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw Error(ErrorCode::InvalidArgument, std::string(which) + " marginal has a negative or non-finite weight");
        }
    }
}

} // namespace

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, double p, double q)
    : rows_(rows), cols_(cols), p_(p), q_(q) {
    if (rows != 0 && cols > kMaxCostEntries / rows) {
        throw Error(ErrorCode::SizeLimit, "cost matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                                              " exceeds " + std::to_string(kMaxCostEntries) + " entries");
    }
    data_.assign(rows * cols, 0.0);
}

std::vector<double> TransportPlan::row_sums() const {
    std::vector<double> out(rows, 0.0);
    for (const auto& e : entries) out[e.source] += e.mass;
    return out;
}

std::vector<double> TransportPlan::col_sums() const {
    std::vector<double> out(cols, 0.0);
    for (const auto& e : entries) out[e.target] += e.mass;
    return out;
}

CostMatrix cost_matrix(const DiscreteDistribution& a, const DiscreteDistribution& b, double p, double q) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::InvalidArgument, "Wasserstein order p must be a finite real >= 1");
    }
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "distributions live in dimensions " + std::to_string(a.dim()) +
                                                      " and " + std::to_string(b.dim()));
    }
    CostMatrix c(a.size(), b.size(), p, q);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double dist = lq_distance(a.atom(i), b.atom(j), q);
            c(i, j) = p == 1.0 ? dist : (p == 2.0 ? dist * dist : std::pow(dist, p));
        }
    }
    return c;
}

EmdResult emd(std::span<const double> weights_a, std::span<const double> weights_b, const CostMatrix& cost) {
    check_weights(weights_a, "source");
    check_weights(weights_b, "target");
    if (weights_a.size() != cost.rows() || weights_b.size() != cost.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "marginal lengths do not match the cost matrix");
    }
    const double mass_a = std::accumulate(weights_a.begin(), weights_a.end(), 0.0);
    const double mass_b = std::accumulate(weights_b.begin(), weights_b.end(), 0.0);
    if (std::abs(mass_a - mass_b) > 1e-6) {
        throw Error(ErrorCode::MassMismatch, "total masses differ: " + std::to_string(mass_a) + " vs " +
                                                 std::to_string(mass_b));
    }

    const std::int64_t na = static_cast<std::int64_t>(weights_a.size());
    const std::int64_t nb = static_cast<std::int64_t>(weights_b.size());
    const bool uniform_a = all_equal(weights_a);
    const bool uniform_b = all_equal(weights_b);
    std::int64_t base = 1;
    if (uniform_a) base = std::lcm(base, na);
    if (uniform_b) base = std::lcm(base, nb);
    const std::int64_t total = uniform_a && uniform_b ? base : base * std::max<std::int64_t>(1, kMassGrid / base);

    const auto supply = to_grid(weights_a, total);
    const auto demand = to_grid(weights_b, total);

    detail::TransportSimplex solver(supply, demand, cost.data());
    EmdResult out;
    out.pivots = solver.run();
    if (solver.artificial_flow() != 0) {
        throw Error(ErrorCode::MassMismatch, "transport problem is infeasible after discretization");
    }

    out.source_potential = solver.source_potentials();
    out.target_potential = solver.sink_potentials();
    // Shift so the source potentials start at zero; f + g is unchanged.
    const double shift = out.source_potential.front();
    for (auto& f : out.source_potential) f -= shift;
    for (auto& g : out.target_potential) g += shift;

    const double scale = 1.0 / static_cast<double>(total);
    out.plan.rows = cost.rows();
    out.plan.cols = cost.cols();
    double primal = 0;
    double min_reduced = std::numeric_limits<double>::infinity();
    double max_support_reduced = 0;
    for (std::size_t i = 0; i < cost.rows(); ++i) {
        for (std::size_t j = 0; j < cost.cols(); ++j) {
            const double reduced = cost(i, j) - out.source_potential[i] - out.target_potential[j];
            min_reduced = std::min(min_reduced, reduced);
            const auto f = solver.flow(i, j);
            if (f > 0) {
                const double mass = static_cast<double>(f) * scale;
                out.plan.entries.push_back({i, j, mass});
                primal += mass * cost(i, j);
                max_support_reduced = std::max(max_support_reduced, std::abs(reduced));
            }
        }
    }
    double dual = 0;
    for (std::size_t i = 0; i < supply.size(); ++i) dual += static_cast<double>(supply[i]) * scale * out.source_potential[i];
    for (std::size_t j = 0; j < demand.size(); ++j) dual += static_cast<double>(demand[j]) * scale * out.target_potential[j];

    out.value = std::max(primal, 0.0);
    out.duality_gap = primal - dual;
    out.min_reduced_cost = min_reduced;
    out.max_support_reduced_cost = max_support_reduced;
    return out;
}

double wasserstein_p(const DiscreteDistribution& a, const DiscreteDistribution& b, double p, double q) {
    const auto c = cost_matrix(a, b, p, q);
    const auto r = emd(a.weights(), b.weights(), c);
    return p == 1.0 ? r.value : std::pow(r.value, 1.0 / p);
}

double assignment_oracle(std::span<const ExpressionProfile> atoms_a, std::span<const ExpressionProfile> atoms_b,
                         double p, double q) {
    const std::size_t k = atoms_a.size();
    if (k > 8) {
        throw Error(ErrorCode::TooLarge, "assignment oracle enumerates k! matchings; k = " + std::to_string(k) + " > 8");
    }
    if (atoms_b.size() != k) {
        throw Error(ErrorCode::InvalidArgument, "assignment oracle needs equally many atoms on both sides");
    }
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "assignment oracle needs at least one atom");
    }
    std::vector<double> c(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            c[i * k + j] = std::pow(lq_distance(atoms_a[i], atoms_b[j], q), p);
        }
    }
    std::vector<std::size_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0;
        for (std::size_t i = 0; i < k; ++i) s += c[i * k + perm[i]];
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::pow(best / static_cast<double>(k), 1.0 / p);
}

} // namespace scdepth
