#include "cli.hpp"

#include "scdepth/allocation.hpp"
#include "scdepth/dimension.hpp"
#include "scdepth/error.hpp"
#include "scdepth/experiment.hpp"
#include "scdepth/ingest.hpp"
#include "scdepth/wasserstein.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#ifndef SCDEPTH_VERSION
#define SCDEPTH_VERSION "0.0.0"
#endif

namespace scdepth::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

std::string flag_name(const std::string& key) {
    std::string f = "--" + key;
    std::replace(f.begin(), f.end(), '_', '-');
    return f;
}

/**
 * Options that can come from flags or from a JSON config file.
 *
 * Each option is stored under its snake_case key. Flags given on the
 * command line win over config values, which win over defaults.
 */
class Settings {
public:
    explicit Settings(CLI::App* app) : app_(app) {}

    template <class T>
    CLI::Option* option(const std::string& key, T& var, const std::string& desc) {
        auto* opt = app_->add_option(flag_name(key), var, desc);
        if constexpr (!is_optional<T>::value) {
            opt->capture_default_str();
        }
        fields_.push_back({key, opt, [&var, key](const json& j) { assign(var, j, key); }, [&var]() { return dump(var); }});
        return opt;
    }

    void apply(const json& file) {
        const json& body = file.contains("command") && file.contains("config") ? file.at("config") : file;
        if (!body.is_object()) {
            throw UsageError("config file must hold a JSON object");
        }
        for (const auto& [key, value] : body.items()) {
            std::string k = key;
            std::replace(k.begin(), k.end(), '-', '_');
            auto it = std::find_if(fields_.begin(), fields_.end(), [&](const Field& f) { return f.key == k; });
            if (it == fields_.end()) {
                throw UsageError("unknown config key '" + key + "'");
            }
            if (it->opt->count() == 0) {
                it->from(value);
            }
        }
    }

    json snapshot() const {
        json j = json::object();
        for (const auto& f : fields_) j[f.key] = f.to();
        return j;
    }

private:
    struct Field {
        std::string key;
        CLI::Option* opt;
        std::function<void(const json&)> from;
        std::function<json()> to;
    };

    template <class T>
    static void assign(T& var, const json& j, const std::string& key) {
        try {
            if constexpr (is_optional<T>::value) {
                if (j.is_null()) {
                    var.reset();
                } else {
                    var = j.get<typename T::value_type>();
                }
            } else {
                var = j.get<T>();
            }
        } catch (const json::exception&) {
            throw UsageError("config key '" + key + "' has the wrong type");
        }
    }

    template <class T>
    static json dump(const T& var) {
        if constexpr (is_optional<T>::value) {
            return var ? json(*var) : json(nullptr);
        } else {
            return json(var);
        }
    }

    CLI::App* app_;
    std::vector<Field> fields_;
};

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

json digests(const fs::path& input) {
    json out = json::object();
    if (input.empty() || !fs::exists(input)) {
        return out;
    }
    if (fs::is_directory(input)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::recursive_directory_iterator(input)) {
            if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out[fs::relative(f, input).generic_string()] = sha256_file(f);
    } else {
        out[input.filename().string()] = sha256_file(input);
    }
    return out;
}

struct Context {
    std::vector<std::string> args;
    std::ostream& out;
    std::ostream& err;
    std::string started_at;
};

void write_manifest(const Context& ctx, const std::string& command, const fs::path& dir, const json& config,
                    std::optional<std::uint64_t> seed, const fs::path& input) {
    json m;
    m["command"] = command;
    m["argv"] = ctx.args;
    m["config"] = config;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["version"] = SCDEPTH_VERSION;
    m["inputs"] = digests(input);
    m["started_at"] = ctx.started_at;
    m["finished_at"] = utc_now();
    std::ofstream os(dir / "manifest.json");
    if (!os) {
        throw Error(ErrorCode::Io, "cannot write " + (dir / "manifest.json").string());
    }
    os << m.dump(2) << '\n';
}

std::uint64_t resolve_seed(std::optional<std::uint64_t>& seed, std::ostream& err) {
    if (!seed) {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        err << "seed: " << *seed << " (generated; pass --seed " << *seed << " to reproduce)\n";
    }
    return *seed;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw UsageError(what);
}

void require_path(const std::string& value, const char* flag) {
    require(!value.empty(), std::string(flag) + " is required");
}

UnseenPolicy::Kind parse_unseen(const std::string& name) {
    if (name == "uniform") return UnseenPolicy::Kind::Uniform;
    if (name == "exclude") return UnseenPolicy::Kind::Exclude;
    throw UsageError("unknown unseen policy '" + name + "' (expected uniform or exclude)");
}

WeightModel::Kind parse_scenario(const std::string& name) {
    try {
        return parse_weight_kind(name);
    } catch (const Error&) {
        throw UsageError("unknown scenario '" + name + "' (expected uniform, coupled or independent)");
    }
}

json load_json(const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw UsageError("cannot read config file " + path);
    }
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw UsageError("config file " + path + " is not valid JSON: " + e.what());
    }
}

// One subcommand: options live on the object, `run` executes after parsing.
class Command {
public:
    Command(CLI::App& parent, const std::string& name, const std::string& desc)
        : app_(parent.add_subcommand(name, desc)), settings_(app_), name_(name) {
        app_->add_option("--config", config_path_, "JSON config file (a run manifest is accepted)");
    }
    virtual ~Command() = default;

    CLI::App* app() const { return app_; }

    int execute(Context& ctx) {
        if (!config_path_.empty()) {
            settings_.apply(load_json(config_path_));
        }
        return run(ctx);
    }

protected:
    virtual int run(Context& ctx) = 0;

    CLI::App* app_;
    Settings settings_;
    std::string name_;
    std::string config_path_;
};

class Ingest : public Command {
public:
    explicit Ingest(CLI::App& parent) : Command(parent, "ingest", "Filter a counts matrix and store it for later commands") {
        settings_.option("input", input_, "Counts matrix (CSV or MatrixMarket)");
        settings_.option("format", format_, "csv, mtx or auto")->check(CLI::IsMember({"csv", "mtx", "auto"}));
        settings_.option("min_cells", min_cells_, "Drop genes expressed in fewer cells");
        settings_.option("hvg", hvg_, "Number of highly variable genes to keep");
        settings_.option("out", out_, "Output directory");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        require_path(out_, "--out");
        require(format_ == "csv" || format_ == "mtx" || format_ == "auto", "--format must be csv, mtx or auto");
        require(hvg_ >= 1, "--hvg must be at least 1");
        const auto fmt = format_ == "auto" ? infer_counts_format(input_) : parse_counts_format(format_);

        auto counts = read_counts(input_, fmt);
        Provenance prov;
        prov.source = input_;
        prov.format = fmt == CountsFormat::Csv ? "csv" : "mtx";
        prov.input_cells = counts.cells();
        prov.input_genes = counts.genes();
        counts = filter_genes(counts, min_cells_, &prov);
        counts = select_hvg(counts, hvg_, &prov);
        const auto pop = build_population(counts, WeightModel::Kind::Uniform, prov);

        fs::create_directories(out_);
        write_counts(out_, counts);
        {
            std::ofstream os(fs::path(out_) / "provenance.json");
            os << pop.provenance.to_json() << '\n';
        }
        write_manifest(ctx, name_, out_, settings_.snapshot(), std::nullopt, input_);
        for (const auto& w : pop.provenance.warnings) ctx.err << "warning: " << w << '\n';
        const auto stats = population_stats(pop.mu);
        ctx.out << "N: " << stats.atom_count << '\n' << "d: " << stats.ambient_dim << '\n'
                << "mean_l0: " << format_double(stats.mean_l0) << '\n';
        return kExitOk;
    }

    std::string input_;
    std::string format_ = "auto";
    std::size_t min_cells_ = 10;
    std::size_t hvg_ = 1000;
    std::string out_;
};

class Stats : public Command {
public:
    explicit Stats(CLI::App& parent) : Command(parent, "stats", "Print population statistics") {
        settings_.option("input", input_, "Ingest directory, population CSV or counts file");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        const auto pop = load_population(input_);
        for (const auto& w : pop.provenance.warnings) ctx.err << "warning: " << w << '\n';
        const auto s = population_stats(pop.mu);
        ctx.out << "N: " << s.atom_count << '\n'
                << "d: " << s.ambient_dim << '\n'
                << "mean_l0: " << format_double(s.mean_l0) << '\n'
                << "mean_sq_l2: " << format_double(s.mean_sq_l2) << '\n';
        return kExitOk;
    }

    std::string input_;
};

fs::path default_out(const std::string& input, const char* leaf) {
    const fs::path in(input);
    return (fs::is_directory(in) ? in : in.parent_path()) / leaf;
}

class Dimension : public Command {
public:
    explicit Dimension(CLI::App& parent) : Command(parent, "dimension", "Estimate intrinsic dimension by PCA") {
        settings_.option("input", input_, "Ingest directory, population CSV or counts file");
        settings_.option("threshold", threshold_, "Explained-variance fraction")->check(CLI::Range(0.0, 1.0));
        settings_.option("out", out_, "Output directory (default: <input>/dimension)");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        require(threshold_ > 0.0 && threshold_ <= 1.0, "--threshold must lie in (0, 1]");
        const auto pop = load_population(input_);
        const auto dim = pca_intrinsic_dim(pop.mu, threshold_);
        const fs::path out = out_.empty() ? default_out(input_, "dimension") : fs::path(out_);
        fs::create_directories(out);
        write_spectrum_csv(out / "spectrum.csv", dim.spectrum);
        write_manifest(ctx, name_, out, settings_.snapshot(), std::nullopt, input_);
        if (dim.degenerate) ctx.err << "warning: population has zero variance; k reported as 0\n";
        ctx.out << "k: " << dim.k << '\n';
        return kExitOk;
    }

    std::string input_;
    double threshold_ = 0.95;
    std::string out_;
};

class Synth : public Command {
public:
    explicit Synth(CLI::App& parent) : Command(parent, "synth", "Build a low-rank synthetic population by NMF") {
        settings_.option("input", input_, "Ingest directory, population CSV or counts file");
        settings_.option("rank", rank_, "Factorization rank r");
        settings_.option("seed", seed_, "Random seed");
        settings_.option("max_iters", max_iters_, "NMF iteration cap");
        settings_.option("tol", tol_, "NMF relative-decrease tolerance");
        settings_.option("threshold", threshold_, "Explained-variance fraction for k")->check(CLI::Range(0.0, 1.0));
        settings_.option("out", out_, "Output directory");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        require_path(out_, "--out");
        require(rank_ >= 1, "--rank must be at least 1");
        require(tol_ >= 0.0, "--tol must be nonnegative");
        require(threshold_ > 0.0 && threshold_ <= 1.0, "--threshold must lie in (0, 1]");
        const auto seed = resolve_seed(seed_, ctx.err);
        const auto pop = load_population(input_);
        Rng rng(seed);
        const auto low = synthesize_low_dim(pop.mu, rank_, rng, {max_iters_, tol_}, threshold_);
        for (const auto& w : low.warnings) ctx.err << "warning: " << w << '\n';

        PopulationSpec out_pop;
        out_pop.mu = low.mu_k;
        out_pop.gene_ids = pop.gene_ids;
        for (auto r : low.kept_rows) {
            out_pop.frequencies.push_back(r < pop.frequencies.size() ? pop.frequencies[r] : 1.0);
            out_pop.atom_ids.push_back(r < pop.atom_ids.size() ? pop.atom_ids[r] : std::to_string(r));
        }
        const fs::path out(out_);
        fs::create_directories(out);
        write_population_csv(out / "population.csv", out_pop);
        write_spectrum_csv(out / "spectrum.csv", low.spectrum);
        {
            std::ofstream os(out / "stats.csv");
            os << "rank,k,relative_error,mean_l0,algorithm\n"
               << rank_ << ',' << low.k << ',' << format_double(low.relative_error) << ','
               << format_double(low.mean_l0) << ",lee-seung-multiplicative-frobenius\n";
        }
        write_manifest(ctx, name_, out, settings_.snapshot(), seed, input_);
        ctx.out << "rank: " << rank_ << '\n'
                << "k: " << low.k << '\n'
                << "relative_error: " << format_double(low.relative_error) << '\n'
                << "mean_l0: " << format_double(low.mean_l0) << '\n';
        return kExitOk;
    }

    std::string input_;
    std::size_t rank_ = 0;
    std::optional<std::uint64_t> seed_;
    std::size_t max_iters_ = 500;
    double tol_ = 1e-5;
    double threshold_ = 0.95;
    std::string out_;
};

class Allocate : public Command {
public:
    explicit Allocate(CLI::App& parent) : Command(parent, "allocate", "Optimal cell count and error bounds for a budget") {
        settings_.option("m", m_, "Read budget");
        settings_.option("mean_l0", mean_l0_, "Mean number of expressed genes per cell");
        settings_.option("k", k_, "Intrinsic dimension (> 4)");
        settings_.option("C", C_, "Allocation constant");
        settings_.option("alpha", alpha_, "Tail exponent in (0, 1)");
        settings_.option("c_star", c_star_, "Lower bound on n * u_i");
        settings_.option("p", p_, "Wasserstein order in [1, 2]");
        settings_.option("mean_sq_l2", mean_sq_l2_, "Mean squared l2 norm of profiles (enables the lower bound)");
        settings_.option("eps", eps_, "Target error for the read-budget bound");
        settings_.option("n", n_, "Cell count for the bounds (default: the optimal n, rounded up)");
        settings_.option("lower_constant", lower_constant_, "Constant multiplying n^(-1/k) in the full lower bound");
    }

private:
    int run(Context& ctx) override {
        require(m_ && *m_ > 0.0, "--m must be positive");
        require(mean_l0_ && *mean_l0_ > 0.0, "--mean-l0 must be positive");
        require(k_.has_value(), "--k is required");
        AllocationParams params;
        params.p = p_;
        params.alpha = alpha_;
        params.c_star = c_star_;
        params.C = C_;
        params.k = *k_;
        params.mean_l0 = *mean_l0_;
        params.mean_sq_l2 = mean_sq_l2_.value_or(0.0);
        if (eps_) require(*eps_ > 0.0 && *eps_ < 1.0, "--eps must lie in (0, 1)");
        require(lower_constant_ >= 0.0, "--lower-constant must be nonnegative");
        try {
            params.validate(true);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }

        const double m = *m_;
        const double n_opt = optimal_cells(m, params);
        const double n = n_ ? *n_ : std::ceil(n_opt);
        require(n >= 1.0, "--n must be at least 1");
        ctx.out << "n_opt: " << format_double(n_opt) << "  [omitted: " << omitted::kOptimalCells << "]\n";
        ctx.out << "n: " << static_cast<std::uint64_t>(std::ceil(n_opt)) << '\n';
        ctx.out << "rate_upper: " << format_double(rate_upper(m, params)) << "  [omitted: " << omitted::kRate << "]\n";
        ctx.out << "upper_bound: " << format_double(expected_error_upper(n, m, params)) << "  [at n=" << n
                << "; omitted: " << omitted::kUpper << "]\n";
        if (mean_sq_l2_) {
            const auto lb = expected_error_lower(n, m, params);
            ctx.out << "lower_bound: " << format_double(lb.bound) << "  [at n=" << n
                    << "; valid: " << (lb.valid ? "yes" : "no") << "]\n";
            ctx.out << "full_lower_bound: " << format_double(full_lower_bound(n, m, lower_constant_, params))
                    << "  [omitted: " << omitted::kFullLower << "]\n";
        }
        if (eps_ && n >= 2.0) {
            ctx.out << "min_reads: " << format_double(min_reads(n, *eps_, params)) << "  [at n=" << n << "]\n";
        }
        if (below_allocation_guard(m, params)) {
            ctx.err << "warning: m = " << format_double(m) << " does not exceed m0 = "
                    << format_double(allocation_guard(params)) << "; the allocation rule is not guaranteed here\n";
        }
        return kExitOk;
    }

    std::optional<double> m_;
    std::optional<double> mean_l0_;
    std::optional<std::size_t> k_;
    double C_ = 0.5;
    double alpha_ = 0.5;
    double c_star_ = 1.0;
    double p_ = 1.0;
    std::optional<double> mean_sq_l2_;
    std::optional<double> eps_;
    std::optional<double> n_;
    double lower_constant_ = 0.0;
};

class Simulate : public Command {
public:
    explicit Simulate(CLI::App& parent) : Command(parent, "simulate", "Run one shallow-sequencing trial") {
        settings_.option("input", input_, "Ingest directory, population CSV or counts file");
        settings_.option("n", n_, "Number of cells");
        settings_.option("m", m_, "Read budget");
        settings_.option("scenario", scenario_, "uniform, coupled or independent");
        settings_.option("unseen_policy", unseen_, "uniform or exclude");
        settings_.option("p", p_, "Wasserstein order");
        settings_.option("q", q_, "Ground metric exponent");
        settings_.option("seed", seed_, "Random seed");
        settings_.option("out", out_, "Optional output directory");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        require(n_ >= 1, "--n must be at least 1");
        require(p_ >= 1.0 && std::isfinite(p_), "--p must be a finite real >= 1");
        require(q_ >= 1.0, "--q must be >= 1");
        const auto kind = parse_scenario(scenario_);
        const auto unseen = parse_unseen(unseen_);
        const auto seed = resolve_seed(seed_, ctx.err);

        const auto pop = load_population(input_, kind);
        SweepConfig cfg;
        cfg.p = p_;
        cfg.q = q_;
        cfg.scenario = kind;
        cfg.unseen_policy = unseen;
        cfg.master_seed = seed;
        const auto r = run_trial(pop, m_, n_, cfg, trial_seed(seed, m_, n_, 0));

        ctx.out << "W_noisy_vs_mu: " << format_double(r.w_noisy_vs_mu) << '\n'
                << "W_noisy_vs_mun: " << format_double(r.w_noisy_vs_mun) << '\n'
                << "W_mun_vs_mu: " << format_double(r.w_mun_vs_mu) << '\n';
        if (!out_.empty()) {
            const fs::path out(out_);
            fs::create_directories(out);
            std::ofstream os(out / "simulate.csv");
            os << "m,n,W_noisy_vs_mu,W_noisy_vs_mun,W_mun_vs_mu\n"
               << m_ << ',' << n_ << ',' << format_double(r.w_noisy_vs_mu) << ',' << format_double(r.w_noisy_vs_mun)
               << ',' << format_double(r.w_mun_vs_mu) << '\n';
            write_manifest(ctx, name_, out, settings_.snapshot(), seed, input_);
        }
        return kExitOk;
    }

    std::string input_;
    std::size_t n_ = 0;
    std::uint64_t m_ = 0;
    std::string scenario_ = "uniform";
    std::string unseen_ = "uniform";
    double p_ = 1.0;
    double q_ = 2.0;
    std::optional<std::uint64_t> seed_;
    std::string out_;
};

class Sweep : public Command {
public:
    explicit Sweep(CLI::App& parent) : Command(parent, "sweep", "Grid sweep over read budget and cell count") {
        settings_.option("input", input_, "Ingest directory, population CSV or counts file");
        settings_.option("out", out_, "Output directory");
        settings_.option("m_grid", m_grid_, "Read budgets, strictly increasing")->delimiter(',');
        settings_.option("n_grid", n_grid_, "Cell counts, strictly increasing")->delimiter(',');
        settings_.option("trials", trials_, "Trials per grid cell");
        settings_.option("p", p_, "Wasserstein order");
        settings_.option("q", q_, "Ground metric exponent");
        settings_.option("scenario", scenario_, "uniform, coupled or independent");
        settings_.option("unseen_policy", unseen_, "uniform or exclude");
        settings_.option("seed", seed_, "Master seed");
        settings_.option("record_population_error", record_population_, "Also compute W(mu_n, mu)");
        settings_.option("workers", workers_, "Worker threads");
        settings_.option("theory_k", theory_k_, "Intrinsic dimension for the theory overlay (> 4)");
        settings_.option("C", C_, "Allocation constant for the overlay");
        settings_.option("alpha", alpha_, "Tail exponent for the overlay");
        settings_.option("c_star", c_star_, "c_* for the overlay");
        settings_.option("svg_width", svg_width_, "SVG width in pixels");
        settings_.option("svg_height", svg_height_, "SVG height in pixels");
    }

private:
    int run(Context& ctx) override {
        require_path(input_, "--input");
        require_path(out_, "--out");
        require(svg_width_ > 0 && svg_height_ > 0, "SVG size must be positive");
        SweepConfig cfg;
        cfg.m_grid = m_grid_;
        cfg.n_grid = n_grid_;
        cfg.trials = trials_;
        cfg.p = p_;
        cfg.q = q_;
        cfg.scenario = parse_scenario(scenario_);
        cfg.unseen_policy = parse_unseen(unseen_);
        cfg.record_population_error = record_population_;
        cfg.workers = workers_;
        const auto seed = resolve_seed(seed_, ctx.err);
        cfg.master_seed = seed;

        const auto pop = load_population(input_, cfg.scenario);
        if (theory_k_) {
            AllocationParams params;
            params.p = std::min(cfg.p, 2.0);
            params.k = *theory_k_;
            params.C = C_;
            params.alpha = alpha_;
            params.c_star = c_star_;
            const auto s = population_stats(pop.mu);
            params.mean_l0 = s.mean_l0;
            params.mean_sq_l2 = s.mean_sq_l2;
            cfg.theory = params;
        }
        try {
            cfg.validate();
        } catch (const Error& e) {
            throw UsageError(e.what());
        }

        const auto result = sweep(pop, cfg);
        const fs::path out(out_);
        emit_outputs(result, out, {svg_width_, svg_height_});
        write_manifest(ctx, name_, out, settings_.snapshot(), seed, input_);

        std::size_t violations = 0;
        for (const auto& c : result.cells) {
            if (!c.ok()) ctx.err << "warning: " << c.error << '\n';
            violations += convexity_violations(c);
        }
        if (violations > 0) {
            ctx.err << "warning: convexity bound violated in " << violations << " trials\n";
        }
        ctx.out << "m,n_star,boundary_flag\n";
        for (const auto& s : result.n_star) ctx.out << s.m << ',' << s.n_star << ',' << (s.boundary ? 1 : 0) << '\n';
        try {
            const auto fit = fit_slope(result.n_star);
            ctx.out << "slope: " << format_double(fit.slope) << " (r2 " << format_double(fit.r2) << ", " << fit.points
                    << " points)\n";
        } catch (const Error&) {
            ctx.out << "slope: unavailable (fewer than two interior optima)\n";
        }
        return kExitOk;
    }

    std::string input_;
    std::string out_;
    std::vector<std::uint64_t> m_grid_ = log_grid(1e3, 1e7, 9);
    std::vector<std::size_t> n_grid_ = [] {
        std::vector<std::size_t> v;
        for (auto x : log_grid(3, 2000, 16)) v.push_back(static_cast<std::size_t>(x));
        return v;
    }();
    std::size_t trials_ = 10;
    double p_ = 1.0;
    double q_ = 2.0;
    std::string scenario_ = "uniform";
    std::string unseen_ = "uniform";
    std::optional<std::uint64_t> seed_;
    bool record_population_ = true;
    std::size_t workers_ = 1;
    std::optional<std::size_t> theory_k_;
    double C_ = 0.5;
    double alpha_ = 0.5;
    double c_star_ = 1.0;
    int svg_width_ = 640;
    int svg_height_ = 480;
};

} // namespace

std::string sha256_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    }
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> md(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    EVP_DigestInit_ex(md.get(), EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (is) {
        is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        EVP_DigestUpdate(md.get(), buf.data(), static_cast<std::size_t>(is.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(md.get(), digest, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sequencing-depth trade-off simulator for single-cell RNA-seq", "scdepth"};
    app.set_version_flag("--version", SCDEPTH_VERSION);
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    commands.push_back(std::make_unique<Ingest>(app));
    commands.push_back(std::make_unique<Stats>(app));
    commands.push_back(std::make_unique<Dimension>(app));
    commands.push_back(std::make_unique<Synth>(app));
    commands.push_back(std::make_unique<Allocate>(app));
    commands.push_back(std::make_unique<Simulate>(app));
    commands.push_back(std::make_unique<Sweep>(app));

    if (args.size() <= 1) {
        err << app.help();
        return kExitUsage;
    }
    std::vector<std::string> rest(args.rbegin(), args.rend() - 1);
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << SCDEPTH_VERSION << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    Context ctx{args, out, err, utc_now()};
    for (auto& cmd : commands) {
        if (!cmd->app()->parsed()) continue;
        try {
            return cmd->execute(ctx);
        } catch (const UsageError& e) {
            err << "error: " << e.what() << "\n\n" << cmd->app()->help();
            return kExitUsage;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
    err << app.help();
    return kExitUsage;
}

int dispatch(int argc, const char* const* argv) {
    return dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}

} // namespace scdepth::cli
