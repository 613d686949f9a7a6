#include "scdepth/ingest.hpp"

#include "scdepth/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace scdepth {

namespace fs = std::filesystem;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        s = s.substr(1, s.size() - 2);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void parse_fail(const fs::path& path, std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::uint64_t parse_count(std::string_view field, const fs::path& path, std::size_t line) {
    std::uint64_t v = 0;
    if (field.empty()) parse_fail(path, line, "empty count field");
    if (field.front() == '-') parse_fail(path, line, "negative count '" + std::string(field) + "'");
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        parse_fail(path, line, "not a nonnegative integer: '" + std::string(field) + "'");
    }
    return v;
}

double parse_real(std::string_view field, const fs::path& path, std::size_t line) {
    double v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        parse_fail(path, line, "not a number: '" + std::string(field) + "'");
    }
    return v;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error(ErrorCode::Io, "cannot read " + path.string());
    }
    return is;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream os(path);
    if (!os) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    return os;
}

CountsMatrix read_csv(const fs::path& path) {
    auto is = open_input(path);
    CountsMatrix out;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        for (auto f : split(line, ',')) header.emplace_back(f);
        break;
    }
    if (header.empty()) {
        parse_fail(path, lineno, "missing header row");
    }

    bool corner = false;
    bool decided = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (!decided) {
            if (fields.size() == header.size()) {
                corner = true;
            } else if (fields.size() != header.size() + 1) {
                parse_fail(path, lineno, "row has " + std::to_string(fields.size()) + " fields, header has " +
                                             std::to_string(header.size()));
            }
            decided = true;
            out.gene_ids.assign(header.begin() + (corner ? 1 : 0), header.end());
        }
        if (fields.size() != out.gene_ids.size() + 1) {
            parse_fail(path, lineno, "expected " + std::to_string(out.gene_ids.size() + 1) + " fields, found " +
                                         std::to_string(fields.size()));
        }
        out.cell_ids.emplace_back(fields[0]);
        CountsMatrix::Row row;
        for (std::size_t j = 1; j < fields.size(); ++j) {
            const auto c = parse_count(fields[j], path, lineno);
            if (c > 0) {
                row.genes.push_back(static_cast<std::uint32_t>(j - 1));
                row.counts.push_back(c);
            }
        }
        out.rows.push_back(std::move(row));
    }
    if (!decided) {
        out.gene_ids = header;
    }
    return out;
}

std::vector<std::string> read_ids(const fs::path& path, std::size_t expected) {
    auto is = open_input(path);
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(is, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        ids.emplace_back(split(t, '\t').front());
    }
    if (ids.size() != expected) {
        throw Error(ErrorCode::ParseError, path.string() + ": expected " + std::to_string(expected) + " ids, found " +
                                               std::to_string(ids.size()));
    }
    return ids;
}

CountsMatrix read_mtx(const fs::path& path) {
    auto is = open_input(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(is, line)) {
        parse_fail(path, 1, "empty file");
    }
    ++lineno;
    {
        std::string lower(line);
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
        std::istringstream banner(lower);
        std::string tag, object, layout, field, symmetry;
        banner >> tag >> object >> layout >> field >> symmetry;
        if (tag != "%%matrixmarket" || object != "matrix" || layout != "coordinate") {
            parse_fail(path, lineno, "expected a MatrixMarket coordinate banner");
        }
        if (field != "integer" || symmetry != "general") {
            parse_fail(path, lineno, "only 'integer general' matrices are supported");
        }
    }

    std::size_t n_rows = 0, n_cols = 0, nnz = 0;
    bool have_size = false;
    std::vector<std::map<std::uint32_t, std::uint64_t>> cells;
    std::size_t seen = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t.front() == '%') continue;
        std::istringstream ss{std::string(t)};
        if (!have_size) {
            if (!(ss >> n_rows >> n_cols >> nnz)) parse_fail(path, lineno, "malformed size line");
            cells.resize(n_rows);
            have_size = true;
            continue;
        }
        std::string si, sj, sv, extra;
        if (!(ss >> si >> sj >> sv) || (ss >> extra)) parse_fail(path, lineno, "expected 'row col value'");
        const auto i = parse_count(si, path, lineno);
        const auto j = parse_count(sj, path, lineno);
        const auto v = parse_count(sv, path, lineno);
        if (i < 1 || i > n_rows || j < 1 || j > n_cols) parse_fail(path, lineno, "index out of range");
        if (v > 0) cells[i - 1][static_cast<std::uint32_t>(j - 1)] += v;
        ++seen;
    }
    if (!have_size) parse_fail(path, lineno, "missing size line");
    if (seen != nnz) {
        parse_fail(path, lineno, "size line declares " + std::to_string(nnz) + " entries, found " + std::to_string(seen));
    }

    CountsMatrix out;
    out.rows.resize(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        for (const auto& [g, c] : cells[i]) {
            out.rows[i].genes.push_back(g);
            out.rows[i].counts.push_back(c);
        }
    }
    const auto dir = path.parent_path();
    if (fs::exists(dir / "genes.tsv")) {
        out.gene_ids = read_ids(dir / "genes.tsv", n_cols);
    } else {
        for (std::size_t j = 0; j < n_cols; ++j) out.gene_ids.push_back("gene_" + std::to_string(j + 1));
    }
    if (fs::exists(dir / "cells.tsv")) {
        out.cell_ids = read_ids(dir / "cells.tsv", n_rows);
    } else {
        for (std::size_t i = 0; i < n_rows; ++i) out.cell_ids.push_back("cell_" + std::to_string(i + 1));
    }
    return out;
}

CountsMatrix keep_genes(const CountsMatrix& counts, const std::vector<bool>& keep) {
    std::vector<std::int64_t> remap(counts.genes(), -1);
    CountsMatrix out;
    for (std::size_t j = 0; j < counts.genes(); ++j) {
        if (keep[j]) {
            remap[j] = static_cast<std::int64_t>(out.gene_ids.size());
            out.gene_ids.push_back(counts.gene_ids[j]);
        }
    }
    out.cell_ids = counts.cell_ids;
    out.rows.resize(counts.cells());
    for (std::size_t i = 0; i < counts.cells(); ++i) {
        const auto& row = counts.rows[i];
        for (std::size_t k = 0; k < row.genes.size(); ++k) {
            const auto r = remap[row.genes[k]];
            if (r >= 0) {
                out.rows[i].genes.push_back(static_cast<std::uint32_t>(r));
                out.rows[i].counts.push_back(row.counts[k]);
            }
        }
    }
    return out;
}

bool is_population_csv(const fs::path& path) {
    std::ifstream is(path);
    std::string line;
    std::getline(is, line);
    return line.rfind("atom,frequency", 0) == 0;
}

PopulationSpec read_population_csv(const fs::path& path, WeightModel::Kind scenario) {
    auto is = open_input(path);
    std::string line;
    std::size_t lineno = 1;
    std::getline(is, line);
    PopulationSpec out;
    const auto header = split(line, ',');
    for (std::size_t j = 2; j < header.size(); ++j) out.gene_ids.emplace_back(header[j]);

    std::vector<ExpressionProfile> atoms;
    std::vector<double> dense(out.gene_ids.size());
    while (std::getline(is, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != header.size()) {
            parse_fail(path, lineno, "expected " + std::to_string(header.size()) + " fields");
        }
        out.atom_ids.emplace_back(fields[0]);
        const double f = parse_real(fields[1], path, lineno);
        if (!(f > 0.0)) parse_fail(path, lineno, "frequency must be positive");
        out.frequencies.push_back(f);
        for (std::size_t j = 2; j < fields.size(); ++j) {
            dense[j - 2] = parse_real(fields[j], path, lineno);
            if (dense[j - 2] < 0.0) parse_fail(path, lineno, "negative profile entry");
        }
        try {
            atoms.push_back(ExpressionProfile::from_dense(dense));
        } catch (const Error& e) {
            parse_fail(path, lineno, e.what());
        }
    }
    if (atoms.empty()) {
        throw Error(ErrorCode::EmptyMatrix, path.string() + " holds no atoms");
    }
    out.mu = DiscreteDistribution::uniform(std::move(atoms));
    out.provenance.source = path.string();
    out.provenance.format = "population-csv";
    out.provenance.input_cells = out.mu.size();
    out.provenance.input_genes = out.gene_ids.size();
    return out.with_scenario(scenario);
}

std::string fmt(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

} // namespace

std::uint64_t CountsMatrix::row_total(std::size_t i) const {
    return std::accumulate(rows[i].counts.begin(), rows[i].counts.end(), std::uint64_t{0});
}

CountsFormat parse_counts_format(std::string_view name) {
    if (name == "csv") return CountsFormat::Csv;
    if (name == "mtx") return CountsFormat::MatrixMarket;
    throw Error(ErrorCode::InvalidArgument, "unknown counts format '" + std::string(name) + "' (expected csv or mtx)");
}

CountsFormat infer_counts_format(const fs::path& path) {
    return path.extension() == ".mtx" ? CountsFormat::MatrixMarket : CountsFormat::Csv;
}

CountsMatrix read_counts(const fs::path& path, CountsFormat format) {
    return format == CountsFormat::Csv ? read_csv(path) : read_mtx(path);
}

void write_counts(const fs::path& dir, const CountsMatrix& counts) {
    fs::create_directories(dir);
    std::size_t nnz = 0;
    for (const auto& r : counts.rows) nnz += r.genes.size();
    {
        auto os = open_output(dir / "counts.mtx");
        os << "%%MatrixMarket matrix coordinate integer general\n";
        os << counts.cells() << ' ' << counts.genes() << ' ' << nnz << '\n';
        for (std::size_t i = 0; i < counts.cells(); ++i) {
            const auto& r = counts.rows[i];
            for (std::size_t k = 0; k < r.genes.size(); ++k) {
                os << (i + 1) << ' ' << (r.genes[k] + 1) << ' ' << r.counts[k] << '\n';
            }
        }
    }
    auto genes = open_output(dir / "genes.tsv");
    for (const auto& g : counts.gene_ids) genes << g << '\n';
    auto cells = open_output(dir / "cells.tsv");
    for (const auto& c : counts.cell_ids) cells << c << '\n';
}

std::string Provenance::to_json() const {
    nlohmann::ordered_json j;
    j["source"] = source;
    j["format"] = format;
    j["input_cells"] = input_cells;
    j["input_genes"] = input_genes;
    auto steps_json = nlohmann::ordered_json::array();
    for (const auto& s : steps) {
        nlohmann::ordered_json step;
        step["step"] = s.name;
        for (const auto& [k, v] : s.parameters) step[k] = v;
        steps_json.push_back(std::move(step));
    }
    j["steps"] = std::move(steps_json);
    j["warnings"] = warnings;
    return j.dump(2);
}

CountsMatrix filter_genes(const CountsMatrix& counts, std::size_t min_cells, Provenance* log) {
    std::vector<std::size_t> expressed(counts.genes(), 0);
    for (const auto& r : counts.rows) {
        for (auto g : r.genes) ++expressed[g];
    }
    std::vector<bool> keep(counts.genes());
    std::size_t kept = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) {
        keep[j] = expressed[j] >= min_cells && expressed[j] > 0;
        kept += keep[j];
    }
    if (kept == 0) {
        throw Error(ErrorCode::EmptyMatrix, "no gene is expressed in at least " + std::to_string(min_cells) + " cells");
    }
    if (log) {
        log->steps.push_back({"filter_genes",
                              {{"min_cells", std::to_string(min_cells)},
                               {"genes_before", std::to_string(counts.genes())},
                               {"genes_dropped", std::to_string(counts.genes() - kept)}}});
    }
    return keep_genes(counts, keep);
}

std::vector<double> gene_dispersions(const CountsMatrix& counts) {
    const std::size_t d = counts.genes();
    const double n = static_cast<double>(counts.cells());
    std::vector<double> sum(d, 0.0), sumsq(d, 0.0);
    for (const auto& r : counts.rows) {
        for (std::size_t k = 0; k < r.genes.size(); ++k) {
            const double c = static_cast<double>(r.counts[k]);
            sum[r.genes[k]] += c;
            sumsq[r.genes[k]] += c * c;
        }
    }
    std::vector<double> out(d, 0.0);
    if (counts.cells() < 2) {
        return out;
    }
    for (std::size_t j = 0; j < d; ++j) {
        const double mean = sum[j] / n;
        if (mean > 0.0) {
            const double var = std::max(0.0, (sumsq[j] - n * mean * mean) / (n - 1.0));
            out[j] = var / mean;
        }
    }
    return out;
}

CountsMatrix select_hvg(const CountsMatrix& counts, std::size_t d_target, Provenance* log) {
    const std::size_t d = counts.genes();
    std::string note;
    if (d_target > d) {
        note = "requested " + std::to_string(d_target) + " genes but only " + std::to_string(d) + " remain; keeping all";
        d_target = d;
    }
    const auto disp = gene_dispersions(counts);
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (disp[a] != disp[b]) return disp[a] > disp[b];
        return counts.gene_ids[a] < counts.gene_ids[b];
    });
    std::vector<bool> keep(d, false);
    for (std::size_t r = 0; r < d_target; ++r) keep[order[r]] = true;
    if (log) {
        log->steps.push_back({"select_hvg",
                              {{"d_target", std::to_string(d_target)},
                               {"genes_before", std::to_string(d)},
                               {"method", "dispersion (variance/mean of raw counts), substituted for seurat_v3"}}});
        if (!note.empty()) log->warnings.push_back(note);
    }
    return keep_genes(counts, keep);
}

PopulationSpec PopulationSpec::with_scenario(WeightModel::Kind kind) const {
    PopulationSpec out = *this;
    switch (kind) {
    case WeightModel::Kind::Uniform: out.scenario = WeightModel::uniform(); break;
    case WeightModel::Kind::Coupled: out.scenario = WeightModel::coupled(frequencies); break;
    case WeightModel::Kind::Independent: out.scenario = WeightModel::independent(frequencies); break;
    }
    return out;
}

PopulationSpec build_population(const CountsMatrix& counts, WeightModel::Kind scenario, Provenance provenance) {
    PopulationSpec out;
    out.gene_ids = counts.gene_ids;
    std::vector<ExpressionProfile> atoms;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < counts.cells(); ++i) {
        const auto& r = counts.rows[i];
        if (r.genes.empty()) {
            ++dropped;
            continue;
        }
        atoms.push_back(normalize_counts_row(counts.genes(), r.genes, r.counts));
        out.frequencies.push_back(static_cast<double>(counts.row_total(i)));
        out.atom_ids.push_back(i < counts.cell_ids.size() ? counts.cell_ids[i] : std::to_string(i));
    }
    if (dropped > 0) {
        provenance.warnings.push_back(std::to_string(dropped) + " all-zero cell rows dropped");
    }
    if (atoms.empty()) {
        throw Error(ErrorCode::EmptyMatrix, "every cell row is all-zero");
    }
    provenance.steps.push_back({"build_population",
                                {{"scenario", std::string(to_string(scenario))},
                                 {"atoms", std::to_string(atoms.size())},
                                 {"cells_dropped", std::to_string(dropped)}}});
    out.mu = DiscreteDistribution::uniform(std::move(atoms));
    out.provenance = std::move(provenance);
    return out.with_scenario(scenario);
}

void write_population_csv(const fs::path& path, const PopulationSpec& population) {
    auto os = open_output(path);
    os << "atom,frequency";
    for (std::size_t j = 0; j < population.mu.dim(); ++j) {
        os << ',' << (j < population.gene_ids.size() ? population.gene_ids[j] : "gene_" + std::to_string(j + 1));
    }
    os << '\n';
    for (std::size_t i = 0; i < population.mu.size(); ++i) {
        os << (i < population.atom_ids.size() ? population.atom_ids[i] : std::to_string(i)) << ','
           << fmt(i < population.frequencies.size() ? population.frequencies[i] : 1.0);
        for (double v : population.mu.atom(i).to_dense()) os << ',' << fmt(v);
        os << '\n';
    }
    if (!os) {
        throw Error(ErrorCode::Io, "failed while writing " + path.string());
    }
}

PopulationSpec load_population(const fs::path& path, WeightModel::Kind scenario) {
    if (fs::is_directory(path)) {
        if (fs::exists(path / "population.csv")) {
            return read_population_csv(path / "population.csv", scenario);
        }
        if (fs::exists(path / "counts.mtx")) {
            return load_population(path / "counts.mtx", scenario);
        }
        throw Error(ErrorCode::Io, path.string() + " holds neither population.csv nor counts.mtx");
    }
    if (!fs::exists(path)) {
        throw Error(ErrorCode::Io, path.string() + " does not exist");
    }
    const auto format = infer_counts_format(path);
    if (format == CountsFormat::Csv && is_population_csv(path)) {
        return read_population_csv(path, scenario);
    }
    const auto counts = read_counts(path, format);
    Provenance prov;
    prov.source = path.string();
    prov.format = format == CountsFormat::Csv ? "csv" : "mtx";
    prov.input_cells = counts.cells();
    prov.input_genes = counts.genes();
    return build_population(counts, scenario, std::move(prov));
}

} // namespace scdepth
