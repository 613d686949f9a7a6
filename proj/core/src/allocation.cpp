#include "scdepth/allocation.hpp"

#include "scdepth/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace scdepth {

namespace {

void require(bool ok, const char* what) {
    if (!ok) {
        throw Error(ErrorCode::InvalidArgument, what);
    }
}

std::string fmt(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

} // namespace

void AllocationParams::validate(bool need_k) const {
    require(p >= 1.0 && p <= 2.0, "p must lie in [1, 2]");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    require(c_star > 0.0 && std::isfinite(c_star), "c_star must be positive");
    require(C > 0.0 && std::isfinite(C), "C must be positive");
    require(mean_l0 > 0.0 && std::isfinite(mean_l0), "mean_l0 must be positive");
    require(mean_sq_l2 >= 0.0 && mean_sq_l2 <= 1.0, "mean_sq_l2 must lie in [0, 1]");
    if (need_k) {
        require(k > 4, "intrinsic dimension k must exceed 4");
    }
}

double min_reads(double n, double eps, const AllocationParams& params) {
    params.validate();
    require(n >= 2.0, "min_reads needs n >= 2");
    require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
    const double scale = 8.0 * (1.0 + params.alpha) * n * params.mean_l0 / params.c_star;
    const double lead = scale / (eps * eps);
    const double correction = scale * std::pow(eps, params.p - 2.0) * std::sqrt(params.alpha * std::log(n) / n);
    return std::max(0.0, lead - correction);
}

double expected_error_upper(double n, double m, const AllocationParams& params) {
    params.validate();
    require(m > 0.0, "read budget m must be positive");
    return std::sqrt(8.0 * params.mean_l0 * n / (params.c_star * m));
}

LowerBound expected_error_lower(double n, double m, const AllocationParams& params) {
    params.validate();
    require(m > 0.0, "read budget m must be positive");
    const double spread = 1.0 - params.mean_sq_l2;
    if (!(spread > 0.0)) {
        return {0.0, false};
    }
    return {spread / 4.0 * n / m, m >= 2.0 * n * std::log(4.0 / spread)};
}

double optimal_cells(double m, const AllocationParams& params) {
    params.validate(true);
    require(m > 0.0, "read budget m must be positive");
    const double k = static_cast<double>(params.k);
    return std::pow(params.C * m / params.mean_l0, 1.0 - 2.0 / (k + 2.0));
}

double allocation_guard(const AllocationParams& params) {
    params.validate();
    return 8.0 * (1.0 + params.alpha) * params.mean_l0 / params.c_star;
}

bool below_allocation_guard(double m, const AllocationParams& params) {
    return !(m > allocation_guard(params));
}

double rate_upper(double m, const AllocationParams& params) {
    params.validate();
    require(m > 0.0, "read budget m must be positive");
    require(params.k > 0, "rate needs an intrinsic dimension k >= 1");
    return std::pow(params.mean_l0 / m, 1.0 / (static_cast<double>(params.k) + 2.0));
}

double full_lower_bound(double n, double m, double constant, const AllocationParams& params) {
    require(params.k > 0, "full lower bound needs an intrinsic dimension k >= 1");
    require(constant >= 0.0, "asymptotic constant must be nonnegative");
    const double main = expected_error_lower(n, m, params).bound;
    return std::max(0.0, main - constant * std::pow(n, -1.0 / static_cast<double>(params.k)));
}

void write_theory_curve_csv(const std::filesystem::path& path, std::span<const double> budgets,
                            const AllocationParams& params) {
    std::ofstream os(path);
    if (!os) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    os << "m,n_opt,upper_rate,lower_bound\n";
    for (double m : budgets) {
        const double n = optimal_cells(m, params);
        os << fmt(m) << ',' << fmt(n) << ',' << fmt(rate_upper(m, params)) << ','
           << fmt(expected_error_lower(n, m, params).bound) << '\n';
    }
    if (!os) {
        throw Error(ErrorCode::Io, "failed while writing " + path.string());
    }
}

} // namespace scdepth
