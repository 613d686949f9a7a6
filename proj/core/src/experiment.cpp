#include "scdepth/experiment.hpp"

#include "scdepth/error.hpp"
#include "scdepth/rng.hpp"
#include "scdepth/wasserstein.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace scdepth {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class T>
bool strictly_increasing(const std::vector<T>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

UnseenPolicy make_policy(const SweepConfig& config) {
    switch (config.unseen_policy) {
    case UnseenPolicy::Kind::Uniform: return UnseenPolicy::uniform();
    case UnseenPolicy::Kind::Fixed: return UnseenPolicy::fixed(config.unseen_profile);
    case UnseenPolicy::Kind::Exclude: return UnseenPolicy::exclude();
    }
    return UnseenPolicy::uniform();
}

std::string cell_label(std::uint64_t m, std::size_t n) {
    return "m=" + std::to_string(m) + ", n=" + std::to_string(n);
}

void summarize(CellResult& cell) {
    const auto t = static_cast<double>(cell.trials.size());
    double sum = 0;
    for (const auto& r : cell.trials) sum += r.w_noisy_vs_mu;
    cell.mean_W = sum / t;
    double ss = 0;
    for (const auto& r : cell.trials) ss += (r.w_noisy_vs_mu - cell.mean_W) * (r.w_noisy_vs_mu - cell.mean_W);
    cell.std_W = cell.trials.size() > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    return os;
}

void finish(std::ofstream& os, const fs::path& path) {
    os.flush();
    if (!os) {
        throw Error(ErrorCode::Io, "failed while writing " + path.string());
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string& s, const fs::path& path, std::size_t line) {
    T v{};
    if (s == "nan" || s == "-nan") {
        if constexpr (std::is_floating_point_v<T>) return std::numeric_limits<T>::quiet_NaN();
    }
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": bad field '" + s + "'");
    }
    return v;
}

std::vector<std::vector<std::string>> read_table(const fs::path& path, std::string_view header) {
    std::ifstream is(path);
    if (!is) {
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    }
    std::string line;
    std::getline(is, line);
    if (line != header) {
        throw Error(ErrorCode::ParseError, path.string() + ":1: unexpected header '" + line + "'");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(is, line)) {
        if (!line.empty()) rows.push_back(split_csv(line));
    }
    return rows;
}

// Minimal SVG plotting on log axes.
class LogPlot {
public:
    LogPlot(int width, int height, double x_lo, double x_hi, double y_lo, double y_hi, bool log_y)
        : w_(width), h_(height), log_y_(log_y) {
        x0_ = std::log10(x_lo);
        x1_ = std::log10(x_hi);
        y0_ = log_y ? std::log10(y_lo) : y_lo;
        y1_ = log_y ? std::log10(y_hi) : y_hi;
        if (x1_ <= x0_) { x0_ -= 0.5; x1_ += 0.5; }
        if (y1_ <= y0_) { const double pad = std::max(std::abs(y0_) * 0.1, 0.5); y0_ -= pad; y1_ += pad; }
    }

    double px(double x) const { return kLeft + (std::log10(x) - x0_) / (x1_ - x0_) * (w_ - kLeft - kRight); }
    double py(double y) const {
        const double v = log_y_ ? std::log10(y) : y;
        return h_ - kBottom - (v - y0_) / (y1_ - y0_) * (h_ - kTop - kBottom);
    }

    std::string axes(const std::string& title, const std::string& xlabel, const std::string& ylabel) const {
        std::ostringstream os;
        os << "<rect x=\"0\" y=\"0\" width=\"" << w_ << "\" height=\"" << h_ << "\" fill=\"white\"/>\n";
        os << "<text x=\"" << w_ / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
        os << "<line x1=\"" << kLeft << "\" y1=\"" << h_ - kBottom << "\" x2=\"" << w_ - kRight << "\" y2=\""
           << h_ - kBottom << "\" stroke=\"black\"/>\n";
        os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << h_ - kBottom
           << "\" stroke=\"black\"/>\n";
        for (int e = static_cast<int>(std::ceil(x0_ - 1e-9)); e <= static_cast<int>(std::floor(x1_ + 1e-9)); ++e) {
            const double x = px(std::pow(10.0, e));
            os << "<line x1=\"" << x << "\" y1=\"" << h_ - kBottom << "\" x2=\"" << x << "\" y2=\"" << h_ - kBottom + 5
               << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << x << "\" y=\"" << h_ - kBottom + 18 << "\" text-anchor=\"middle\" font-size=\"11\">1e"
               << e << "</text>\n";
        }
        if (log_y_) {
            for (int e = static_cast<int>(std::ceil(y0_ - 1e-9)); e <= static_cast<int>(std::floor(y1_ + 1e-9)); ++e) {
                y_tick(os, py(std::pow(10.0, e)), "1e" + std::to_string(e));
            }
        } else {
            for (int i = 0; i <= 4; ++i) {
                const double v = y0_ + (y1_ - y0_) * i / 4.0;
                std::ostringstream label;
                label.precision(3);
                label << v;
                y_tick(os, py(v), label.str());
            }
        }
        os << "<text x=\"" << (kLeft + w_ - kRight) / 2 << "\" y=\"" << h_ - 8
           << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
        os << "<text x=\"14\" y=\"" << (kTop + h_ - kBottom) / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
           << "transform=\"rotate(-90 14 " << (kTop + h_ - kBottom) / 2 << ")\">" << ylabel << "</text>\n";
        return os.str();
    }

private:
    static constexpr int kLeft = 70;
    static constexpr int kRight = 20;
    static constexpr int kTop = 30;
    static constexpr int kBottom = 45;

    void y_tick(std::ostringstream& os, double y, const std::string& label) const {
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << label
           << "</text>\n";
    }

    int w_;
    int h_;
    bool log_y_;
    double x0_, x1_, y0_, y1_;
};

std::string svg_open(int w, int h) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h
       << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n";
    return os.str();
}

const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

void write_nstar_svg(const SweepResult& result, const fs::path& path, const OutputOptions& opt) {
    const auto& cfg = result.config;
    double y_lo = static_cast<double>(cfg.n_grid.front());
    double y_hi = static_cast<double>(cfg.n_grid.back());
    std::vector<double> theory;
    if (cfg.theory) {
        for (auto m : cfg.m_grid) {
            theory.push_back(optimal_cells(static_cast<double>(m), *cfg.theory));
            y_lo = std::min(y_lo, theory.back());
            y_hi = std::max(y_hi, theory.back());
        }
    }
    y_lo = std::max(y_lo, 1.0);
    LogPlot plot(opt.svg_width, opt.svg_height, static_cast<double>(cfg.m_grid.front()),
                 static_cast<double>(cfg.m_grid.back()), y_lo, std::max(y_hi, y_lo), true);
    auto os = open_output(path);
    os << svg_open(opt.svg_width, opt.svg_height);
    os << plot.axes("optimal number of cells", "read budget m", "n*");
    if (!theory.empty()) {
        os << "<polyline fill=\"none\" stroke=\"#555555\" stroke-dasharray=\"6 4\" points=\"";
        for (std::size_t i = 0; i < theory.size(); ++i) {
            os << plot.px(static_cast<double>(cfg.m_grid[i])) << ',' << plot.py(std::max(theory[i], y_lo)) << ' ';
        }
        os << "\"/>\n";
    }
    for (const auto& s : result.n_star) {
        os << "<circle cx=\"" << plot.px(static_cast<double>(s.m)) << "\" cy=\""
           << plot.py(static_cast<double>(s.n_star)) << "\" r=\"4\" stroke=\"#1f77b4\" fill=\""
           << (s.boundary ? "none" : "#1f77b4") << "\"/>\n";
    }
    os << "</svg>\n";
    finish(os, path);
}

void write_curves_svg(const SweepResult& result, const fs::path& path, const OutputOptions& opt) {
    const auto& cfg = result.config;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0;
    for (const auto& c : result.cells) {
        if (c.ok() && c.mean_W > 0) {
            lo = std::min(lo, c.mean_W);
            hi = std::max(hi, c.mean_W);
        }
    }
    if (!(hi > 0)) {
        lo = 0.1;
        hi = 1;
    }
    LogPlot plot(opt.svg_width, opt.svg_height, static_cast<double>(cfg.n_grid.front()),
                 static_cast<double>(cfg.n_grid.back()), lo, hi, true);
    auto os = open_output(path);
    os << svg_open(opt.svg_width, opt.svg_height);
    os << plot.axes("mean transport error by number of cells", "number of cells n", "mean W");
    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
        os << "<polyline fill=\"none\" stroke=\"" << palette(mi) << "\" points=\"";
        for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
            const auto& c = result.at(mi, ni);
            if (c.ok() && c.mean_W > 0) {
                os << plot.px(static_cast<double>(c.n)) << ',' << plot.py(c.mean_W) << ' ';
            }
        }
        os << "\"/>\n";
        os << "<text x=\"" << opt.svg_width - 24 << "\" y=\"" << 40 + 14 * static_cast<int>(mi)
           << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << palette(mi) << "\">m=" << cfg.m_grid[mi]
           << "</text>\n";
    }
    os << "</svg>\n";
    finish(os, path);
}

} // namespace

void SweepConfig::validate() const {
    if (m_grid.empty() || n_grid.empty()) {
        throw Error(ErrorCode::InvalidArgument, "sweep grids must be nonempty");
    }
    if (!strictly_increasing(m_grid) || !strictly_increasing(n_grid)) {
        throw Error(ErrorCode::InvalidArgument, "sweep grids must be strictly increasing");
    }
    if (n_grid.front() == 0) {
        throw Error(ErrorCode::InvalidArgument, "n grid entries must be positive");
    }
    if (trials == 0) {
        throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw Error(ErrorCode::InvalidArgument, "p must be a finite real >= 1");
    }
    if (!(q >= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "q must lie in [1, inf]");
    }
    if (workers == 0) {
        throw Error(ErrorCode::InvalidArgument, "workers must be at least 1");
    }
    if (unseen_policy == UnseenPolicy::Kind::Fixed && unseen_profile.dim() == 0) {
        throw Error(ErrorCode::InvalidArgument, "fixed unseen policy needs a profile");
    }
    if (theory) {
        theory->validate(true);
    }
}

std::vector<std::uint64_t> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo >= 1.0) || !(hi >= lo) || count == 0) {
        throw Error(ErrorCode::InvalidArgument, "log grid needs 1 <= lo <= hi and count >= 1");
    }
    std::vector<std::uint64_t> out;
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const auto v = static_cast<std::uint64_t>(std::llround(std::exp(a + (b - a) * t)));
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

std::size_t convexity_violations(const CellResult& cell) {
    std::size_t bad = 0;
    for (const auto& r : cell.trials) {
        if (!std::isnan(r.convexity_rhs) && r.convexity_lhs > r.convexity_rhs + kConvexitySlack) ++bad;
    }
    return bad;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t m, std::size_t n, std::size_t trial) {
    return hash_keys(master, {m, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
}

TrialRecord run_trial(const PopulationSpec& population, std::uint64_t m, std::size_t n, const SweepConfig& config,
                      std::uint64_t seed) {
    const Rng rng(seed);
    Rng sample_rng = rng.derive(1);
    Rng sequence_rng = rng.derive(2);
    const auto sample = sample_cells(population.mu, n, population.scenario, sample_rng);
    const auto run = shallow_sequence(sample.cells, sample.raw_weights, m, make_policy(config), sequence_rng);
    const auto noisy = noisy_empirical(run);
    const auto truth = true_empirical(run);
    const double p = config.p;
    const auto root = [p](double v) { return p == 1.0 ? v : std::pow(v, 1.0 / p); };

    TrialRecord out;
    out.w_noisy_vs_mu = wasserstein_p(noisy, population.mu, p, config.q);

    const auto paired = emd(noisy.weights(), truth.weights(), cost_matrix(noisy, truth, p, config.q));
    out.convexity_lhs = paired.value;
    out.w_noisy_vs_mun = root(paired.value);

    if (noisy.size() == truth.size()) {
        double s = 0;
        for (std::size_t i = 0; i < run.size(); ++i) {
            const double dist = lq_distance(run.noisy_profiles[i], run.sampled_cells[i], config.q);
            s += p == 1.0 ? dist : std::pow(dist, p);
        }
        out.convexity_rhs = s / static_cast<double>(run.size());
    } else {
        out.convexity_rhs = kNaN;
    }

    out.w_mun_vs_mu = config.record_population_error ? wasserstein_p(truth, population.mu, p, config.q) : kNaN;
    return out;
}

CellResult run_cell(const PopulationSpec& population, std::uint64_t m, std::size_t n, const SweepConfig& config) {
    CellResult cell;
    cell.m = m;
    cell.n = n;
    for (std::size_t t = 0; t < config.trials; ++t) {
        try {
            cell.trials.push_back(run_trial(population, m, n, config, trial_seed(config.master_seed, m, n, t)));
        } catch (const Error& e) {
            throw Error(e.code(), cell_label(m, n) + ": " + e.what());
        }
    }
    summarize(cell);
    return cell;
}

SweepResult sweep(const PopulationSpec& population, const SweepConfig& config) {
    config.validate();
    SweepResult result;
    result.config = config;
    const std::size_t nm = config.m_grid.size();
    const std::size_t nn = config.n_grid.size();
    const std::size_t cells = nm * nn;
    const std::size_t tasks = cells * config.trials;

    std::vector<TrialRecord> records(tasks);
    std::vector<std::string> errors(tasks);
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (std::size_t task = next++; task < tasks; task = next++) {
            const std::size_t cell = task / config.trials;
            const std::size_t t = task % config.trials;
            const auto m = config.m_grid[cell / nn];
            const auto n = config.n_grid[cell % nn];
            try {
                records[task] = run_trial(population, m, n, config, trial_seed(config.master_seed, m, n, t));
            } catch (const std::exception& e) {
                errors[task] = cell_label(m, n) + ": " + e.what();
            }
        }
    };

    const std::size_t workers = std::min(config.workers, std::max<std::size_t>(tasks, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    result.cells.resize(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        auto& cell = result.cells[c];
        cell.m = config.m_grid[c / nn];
        cell.n = config.n_grid[c % nn];
        for (std::size_t t = 0; t < config.trials; ++t) {
            const std::size_t task = c * config.trials + t;
            if (!errors[task].empty()) {
                cell.error = errors[task];
                cell.trials.clear();
                break;
            }
            cell.trials.push_back(records[task]);
        }
        if (cell.ok()) {
            summarize(cell);
        } else {
            cell.mean_W = kNaN;
            cell.std_W = kNaN;
        }
    }
    result.n_star = find_optimal_n(result);
    return result;
}

std::vector<NStar> find_optimal_n(const SweepResult& result) {
    const auto& cfg = result.config;
    std::vector<NStar> out;
    for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
        std::size_t best = cfg.n_grid.size();
        std::size_t first = cfg.n_grid.size();
        std::size_t last = 0;
        for (std::size_t ni = 0; ni < cfg.n_grid.size(); ++ni) {
            const auto& c = result.at(mi, ni);
            if (!c.ok()) continue;
            first = std::min(first, ni);
            last = ni;
            if (best == cfg.n_grid.size() || c.mean_W < result.at(mi, best).mean_W) best = ni;
        }
        if (best == cfg.n_grid.size()) continue;
        out.push_back({cfg.m_grid[mi], cfg.n_grid[best], best == first || best == last, result.at(mi, best).mean_W});
    }
    return out;
}

SlopeFit fit_slope(const std::vector<NStar>& n_star) {
    std::vector<double> x, y;
    for (const auto& s : n_star) {
        if (s.boundary) continue;
        x.push_back(std::log(static_cast<double>(s.m)));
        y.push_back(std::log(static_cast<double>(s.n_star)));
    }
    if (x.size() < 2) {
        throw Error(ErrorCode::InsufficientData, "slope fit needs at least two non-boundary points, have " +
                                                     std::to_string(x.size()));
    }
    const double k = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / k;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / k;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0)) {
        throw Error(ErrorCode::InsufficientData, "slope fit needs at least two distinct budgets");
    }
    SlopeFit fit;
    fit.points = x.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.r2 = syy > 0 ? 1.0 - ssr / syy : 1.0;
    return fit;
}

std::vector<EnvelopeCheck> lower_envelope(const SweepResult& result, double mean_sq_l2) {
    const auto& cfg = result.config;
    if (cfg.scenario != WeightModel::Kind::Uniform) {
        throw Error(ErrorCode::InvalidArgument, "the lower envelope holds for uniform cell weights only");
    }
    if (cfg.q < 1.0 || cfg.q > 2.0) {
        throw Error(ErrorCode::InvalidArgument, "the lower envelope needs q in [1, 2]");
    }
    AllocationParams params;
    params.mean_sq_l2 = mean_sq_l2;
    std::vector<EnvelopeCheck> out;
    for (const auto& c : result.cells) {
        if (!c.ok()) continue;
        const auto lb = expected_error_lower(static_cast<double>(c.n), static_cast<double>(c.m), params);
        if (!lb.valid) continue;
        EnvelopeCheck e;
        e.m = c.m;
        e.n = c.n;
        e.bound = lb.bound;
        double sum = 0;
        for (const auto& r : c.trials) sum += r.w_noisy_vs_mun;
        const double t = static_cast<double>(c.trials.size());
        e.mean = sum / t;
        double ss = 0;
        for (const auto& r : c.trials) ss += (r.w_noisy_vs_mun - e.mean) * (r.w_noisy_vs_mun - e.mean);
        e.sigma = c.trials.size() > 1 ? std::sqrt(ss / (t - 1.0) / t) : 0.0;
        e.satisfied = e.mean >= e.bound - 3.0 * e.sigma;
        out.push_back(e);
    }
    return out;
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

void emit_outputs(const SweepResult& result, const fs::path& dir, const OutputOptions& options) {
    fs::create_directories(dir);
    const auto& cfg = result.config;
    {
        const auto path = dir / "results.csv";
        auto os = open_output(path);
        os << "m,n,trial,W_noisy_vs_mu,W_noisy_vs_mun,W_mun_vs_mu\n";
        for (const auto& c : result.cells) {
            for (std::size_t t = 0; t < c.trials.size(); ++t) {
                const auto& r = c.trials[t];
                os << c.m << ',' << c.n << ',' << t << ',' << format_double(r.w_noisy_vs_mu) << ','
                   << format_double(r.w_noisy_vs_mun) << ',' << format_double(r.w_mun_vs_mu) << '\n';
            }
        }
        finish(os, path);
    }
    {
        const auto path = dir / "summary.csv";
        auto os = open_output(path);
        os << "m,n,mean_W,std_W\n";
        for (const auto& c : result.cells) {
            os << c.m << ',' << c.n << ',' << format_double(c.mean_W) << ',' << format_double(c.std_W) << '\n';
        }
        finish(os, path);
    }
    {
        const auto path = dir / "nstar.csv";
        auto os = open_output(path);
        os << "m,n_star,boundary_flag" << (cfg.theory ? ",theory_n" : "") << '\n';
        for (const auto& s : result.n_star) {
            os << s.m << ',' << s.n_star << ',' << (s.boundary ? 1 : 0);
            if (cfg.theory) os << ',' << format_double(optimal_cells(static_cast<double>(s.m), *cfg.theory));
            os << '\n';
        }
        finish(os, path);
    }
    write_nstar_svg(result, dir / "nstar.svg", options);
    write_curves_svg(result, dir / "error_curves.svg", options);
}

std::vector<SummaryRow> read_summary_csv(const fs::path& path) {
    std::vector<SummaryRow> out;
    std::size_t line = 1;
    for (const auto& f : read_table(path, "m,n,mean_W,std_W")) {
        ++line;
        if (f.size() != 4) throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": expected 4 fields");
        out.push_back({parse_field<std::uint64_t>(f[0], path, line), parse_field<std::size_t>(f[1], path, line),
                       parse_field<double>(f[2], path, line), parse_field<double>(f[3], path, line)});
    }
    return out;
}

std::vector<ResultRow> read_results_csv(const fs::path& path) {
    std::vector<ResultRow> out;
    std::size_t line = 1;
    for (const auto& f : read_table(path, "m,n,trial,W_noisy_vs_mu,W_noisy_vs_mun,W_mun_vs_mu")) {
        ++line;
        if (f.size() != 6) throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": expected 6 fields");
        ResultRow r;
        r.m = parse_field<std::uint64_t>(f[0], path, line);
        r.n = parse_field<std::size_t>(f[1], path, line);
        r.trial = parse_field<std::size_t>(f[2], path, line);
        r.record.w_noisy_vs_mu = parse_field<double>(f[3], path, line);
        r.record.w_noisy_vs_mun = parse_field<double>(f[4], path, line);
        r.record.w_mun_vs_mu = parse_field<double>(f[5], path, line);
        out.push_back(r);
    }
    return out;
}

} // namespace scdepth
