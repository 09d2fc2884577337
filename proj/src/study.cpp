#include "gd/study.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace gd {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw UsageError(key + ": not an integer: '" + text + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw UsageError(key + ": not a boolean: '" + text + "'");
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "," : "") + items[i];
    return out;
}

}  // namespace

Resolution StudyConfig::resolution() const {
    return {panels_per_n, points_per_panel, grid_points, force_resolution};
}

void validate(const StudyConfig& c) {
    if (c.n_values.empty()) throw UsageError("n_values must be nonempty");
    for (int n : c.n_values)
        if (n < 1) throw UsageError("n_values must be positive, got " + std::to_string(n));
    if (!std::is_sorted(c.n_values.begin(), c.n_values.end()) ||
        std::adjacent_find(c.n_values.begin(), c.n_values.end()) != c.n_values.end())
        throw UsageError("n_values must be strictly increasing");
    if (c.functions.empty()) throw UsageError("functions must be nonempty");
    for (const auto& f : c.functions)
        if (!battery_function(f)) throw UsageError("unknown function label '" + f + "'");
    if (c.operators.empty()) throw UsageError("operators must be nonempty");
    if (c.norms.empty()) throw UsageError("norms must be nonempty");
    if (c.panels_per_n < 1) throw UsageError("panels-per-n must be positive");
    if (c.panels_per_n < 4 && !c.force_resolution)
        throw UsageError("panels-per-n=" + std::to_string(c.panels_per_n) +
                         " under-resolves degree-n kernels; pass --force-resolution to run anyway");
    if (c.points_per_panel < 2) throw UsageError("points-per-panel must be >= 2");
    if (c.grid_points < 2) throw UsageError("grid must have at least 2 points");
    if (!c.model.empty() && !parse_rate_model(c.model)) throw UsageError("unknown rate model '" + c.model + "'");
}

void apply_setting(StudyConfig& c, const std::string& raw_key, const std::string& raw_value) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string value = trim(raw_value);
    if (key == "n") {
        c.n_values.clear();
        for (const auto& item : split_list(value)) c.n_values.push_back(static_cast<int>(parse_integer(key, item)));
    } else if (key == "functions") {
        c.functions = split_list(value);
    } else if (key == "operators") {
        c.operators.clear();
        for (const auto& item : split_list(value)) {
            const auto op = parse_operator_kind(item);
            if (!op) throw UsageError("unknown operator '" + item + "'");
            c.operators.push_back(*op);
        }
    } else if (key == "norms") {
        c.norms.clear();
        for (const auto& item : split_list(value)) {
            const auto nm = parse_norm(item);
            if (!nm) throw UsageError("unknown norm '" + item + "'");
            c.norms.push_back(*nm);
        }
    } else if (key == "panels-per-n") {
        c.panels_per_n = static_cast<int>(parse_integer(key, value));
    } else if (key == "points-per-panel") {
        c.points_per_panel = static_cast<int>(parse_integer(key, value));
    } else if (key == "grid") {
        const auto g = parse_integer(key, value);
        if (g < 0) throw UsageError("grid must be positive");
        c.grid_points = static_cast<std::size_t>(g);
    } else if (key == "format") {
        if (value == "csv")
            c.output_format = OutputFormat::csv;
        else if (value == "json")
            c.output_format = OutputFormat::json;
        else
            throw UsageError("format must be csv or json, got '" + value + "'");
    } else if (key == "out") {
        c.out = value;
    } else if (key == "force-resolution") {
        c.force_resolution = parse_bool(key, value);
    } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_integer(key, value));
    } else if (key == "model") {
        c.model = value;
    } else if (key == "input") {
        c.input = value;
    } else if (key == "timing") {
        c.timing = parse_bool(key, value);
    } else {
        throw UsageError("unknown configuration key '" + raw_key + "'");
    }
}

StudyConfig load_config_file(const std::string& path, StudyConfig base) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

std::string canonical_config(const StudyConfig& c) {
    std::vector<std::string> ns;
    for (int n : c.n_values) ns.push_back(std::to_string(n));
    std::vector<std::string> ops;
    for (auto op : c.operators) ops.emplace_back(to_string(op));
    std::vector<std::string> norms;
    for (const auto& nm : c.norms) norms.push_back(nm.label());
    std::ostringstream os;
    os << "n=" << join(ns) << ";functions=" << join(c.functions) << ";operators=" << join(ops)
       << ";norms=" << join(norms) << ";panels-per-n=" << c.panels_per_n
       << ";points-per-panel=" << c.points_per_panel << ";grid=" << c.grid_points
       << ";force-resolution=" << (c.force_resolution ? 1 : 0) << ";seed=" << c.seed
       << ";model=" << (c.model.empty() ? "auto" : c.model);
    return os.str();
}

std::uint64_t config_hash(const StudyConfig& c) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical_config(c)) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string config_hash_hex(const StudyConfig& c) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(c)));
    return buf;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_table(std::ostream& os, const std::vector<Row>& rows, OutputFormat format, const std::string& comment) {
    if (format == OutputFormat::json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < row.fields.size(); ++i) {
                const auto& [name, cell] = row.fields[i];
                if (!row.numeric[i]) {
                    obj[name] = cell;
                } else {
                    const double v = std::strtod(cell.c_str(), nullptr);
                    if (std::isfinite(v))
                        obj[name] = v;
                    else
                        obj[name] = nullptr;
                }
            }
            arr.push_back(std::move(obj));
        }
        os << arr.dump(1) << '\n';
        return;
    }
    os << "# " << comment << '\n';
    if (rows.empty()) return;
    for (std::size_t i = 0; i < rows.front().fields.size(); ++i) os << (i ? "," : "") << rows.front().fields[i].first;
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.fields.size(); ++i) os << (i ? "," : "") << row.fields[i].second;
        os << '\n';
    }
}

// ---------------------------------------------------------------------------
// verify

std::vector<VerifyCheck> run_verification(const StudyConfig& config) {
    validate(config);
    std::vector<VerifyCheck> checks;
    const auto grid = uniform_grid(config.grid_points);
    std::mt19937_64 rng(config.seed);
    const auto one = constant_function(1.0);

    for (int n : config.n_values) {
        const QuadratureRule rule = build_rule(default_panels(n, config.panels_per_n), config.points_per_panel);

        const auto mass = verify_kernel_mass(n, rule, config.force_resolution);
        std::size_t worst = 0;
        for (std::size_t k = 0; k < mass.deviations.size(); ++k)
            if (std::abs(mass.deviations[k]) > std::abs(mass.deviations[worst])) worst = k;
        checks.push_back({"kernel_mass", n, pi / n + mass.deviations[worst], mass.max_deviation, 1e-8});

        const KernelTable table = kernel_table(n, grid);
        double worst_sum = 1.0;
        double worst_dev = 0.0;
        for (std::size_t j = 0; j < table.size(); ++j) {
            const double s = table.column_sum(j);
            if (std::abs(s - 1.0) >= worst_dev) {
                worst_dev = std::abs(s - 1.0);
                worst_sum = s;
            }
        }
        checks.push_back({"partition_of_unity", n, worst_sum, worst_dev, 1e-9});

        double card = 0.0;
        const NodeSet nodes = chebyshev_nodes(n);
        for (int k = 1; k <= n; ++k)
            for (int j = 1; j <= n; ++j)
                card = std::max(card, std::abs(lagrange_basis_series(n, k, nodes[j]) - (j == k ? 1.0 : 0.0)));
        checks.push_back({"cardinality", n, 1.0, card, 1e-9});

        std::uniform_int_distribution<int> pick_k(1, n);
        std::uniform_real_distribution<double> pick_t(0.0, pi);
        double dual = 0.0;
        for (int s = 0; s < 2000;) {
            const int k = pick_k(rng);
            const double t = pick_t(rng);
            bool near_node = false;
            for (double a : nodes.angles) near_node = near_node || std::abs(t - a) < 1e-3;
            if (near_node) continue;
            dual = std::max(dual, std::abs(lagrange_basis_direct(n, k, t) - lagrange_basis_series(n, k, t)));
            ++s;
        }
        checks.push_back({"dual_path", n, 0.0, dual, 1e-9});

        const OperatorWorkspace ws(n, rule, grid, config.force_resolution);
        for (auto op : {OperatorKind::grunwald, OperatorKind::durrmeyer}) {
            const auto img = ws.apply_on_grid(op, one);
            double dev = 0.0;
            double val = 1.0;
            for (double v : img)
                if (std::abs(v - 1.0) >= dev) {
                    dev = std::abs(v - 1.0);
                    val = v;
                }
            checks.push_back({std::string(to_string(op)) + "_constant", n, val, dev, 1e-9});
        }
    }
    return checks;
}

namespace {

std::string header_comment(const std::string& command, const StudyConfig& c) {
    return "gdstudy " + command + " config_hash=" + config_hash_hex(c) + " " + canonical_config(c);
}

// Writes to config.out when set, otherwise to `fallback`.
template <class Fn>
void emit(const StudyConfig& c, std::ostream& fallback, Fn&& write) {
    if (c.out.empty()) {
        write(fallback);
        return;
    }
    std::ofstream file(c.out, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + c.out + "'");
    write(file);
}

}  // namespace

int cmd_verify(const StudyConfig& config, std::ostream& out, std::ostream& log) {
    const auto checks = run_verification(config);
    std::vector<Row> rows;
    bool ok = true;
    for (const auto& chk : checks) {
        Row r;
        r.add("check", chk.check);
        r.add("n", static_cast<long long>(chk.n));
        r.add("value", chk.value);
        r.add("deviation", chk.deviation);
        r.add("tolerance", chk.tolerance);
        r.add("status", chk.pass() ? "pass" : "FAIL");
        rows.push_back(std::move(r));
        if (!chk.pass()) {
            ok = false;
            log << "FAIL " << chk.check << " n=" << chk.n << " deviation=" << format_number(chk.deviation)
                << " tolerance=" << format_number(chk.tolerance) << '\n';
        }
    }
    emit(config, out, [&](std::ostream& os) { write_table(os, rows, config.output_format, header_comment("verify", config)); });
    log << (ok ? "verify: all " : "verify: failures among ") << checks.size() << " checks\n";
    return ok ? exit_ok : exit_verification_failure;
}

// ---------------------------------------------------------------------------
// converge

std::vector<ConvergenceRecord> run_convergence(const StudyConfig& config, std::vector<double>* wall_ms) {
    validate(config);
    std::vector<RealFunction> functions;
    std::vector<double> breaks;
    for (const auto& label : config.functions) {
        functions.push_back(*battery_function(label));
        const auto b = functions.back().breakpoints();
        breaks.insert(breaks.end(), b.begin(), b.end());
    }
    struct Keyed {
        std::tuple<int, std::string, std::string, std::string> key;
        ConvergenceRecord rec;
        double ms;
    };
    std::vector<Keyed> rows;
    for (int n : config.n_values) {
        const OperatorWorkspace ws(n, config.resolution(), breaks);
        for (const auto& f : functions)
            for (auto op : config.operators)
                for (const auto& norm : config.norms) {
                    const auto t0 = std::chrono::steady_clock::now();
                    ConvergenceRecord rec{n, f.label, op, norm, 0.0, default_model_for(norm).value(n)};
                    try {
                        rec.error = ws.error(f, op, norm);
                    } catch (const EvaluationError&) {
                        rec.error = std::numeric_limits<double>::quiet_NaN();
                    }
                    const double ms =
                        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
                    rows.push_back({{n, f.label, std::string(to_string(op)), norm.label()}, rec, ms});
                }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
    std::vector<ConvergenceRecord> out;
    if (wall_ms) wall_ms->clear();
    for (auto& r : rows) {
        out.push_back(std::move(r.rec));
        if (wall_ms) wall_ms->push_back(r.ms);
    }
    return out;
}

int cmd_converge(const StudyConfig& config, std::ostream& out, std::ostream& log) {
    std::vector<double> ms;
    const auto records = run_convergence(config, &ms);
    std::vector<Row> rows;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        Row r;
        r.add("n", static_cast<long long>(rec.n));
        r.add("function", rec.function_label);
        r.add("operator", std::string(to_string(rec.op)));
        r.add("norm", rec.norm.label());
        r.add("error", rec.error);
        r.add("model_value", rec.model_value);
        r.add("wall_ms", config.timing ? ms[i] : 0.0);
        rows.push_back(std::move(r));
        if (std::isnan(rec.error)) ++failures;
    }
    emit(config, out, [&](std::ostream& os) { write_table(os, rows, config.output_format, header_comment("converge", config)); });
    log << "converge: " << records.size() << " records";
    if (failures) log << ", " << failures << " evaluation failures";
    log << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------
// rates

std::vector<RateFitRow> fit_rates(const std::vector<ConvergenceRecord>& records, const std::optional<RateModel>& model) {
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<ConvergenceRecord>> groups;
    for (const auto& r : records)
        groups[{r.function_label, std::string(to_string(r.op)), r.norm.label()}].push_back(r);
    std::vector<RateFitRow> out;
    for (auto& [key, recs] : groups) {
        const RateModel m = model ? *model : default_model_for(recs.front().norm);
        for (auto& r : recs) r.model_value = m.value(r.n);
        RateFitRow row{recs.front().function_label, recs.front().op, recs.front().norm, m.label(), std::nullopt};
        try {
            row.fit = rate_fit(recs);
        } catch (const DomainError&) {
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<ConvergenceRecord> read_convergence_csv(std::istream& is) {
    std::vector<ConvergenceRecord> out;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_list(line);
        if (header.empty()) {
            header = cells;
            continue;
        }
        std::map<std::string, std::string> m;
        for (std::size_t i = 0; i < header.size() && i < cells.size(); ++i) m[header[i]] = cells[i];
        for (const char* col : {"n", "function", "operator", "norm", "error"})
            if (!m.count(col)) throw UsageError(std::string("converge CSV lacks column '") + col + "'");
        ConvergenceRecord rec;
        rec.n = static_cast<int>(parse_integer("n", m["n"]));
        rec.function_label = m["function"];
        const auto op = parse_operator_kind(m["operator"]);
        const auto norm = parse_norm(m["norm"]);
        if (!op || !norm) throw UsageError("converge CSV: bad operator or norm in line '" + line + "'");
        rec.op = *op;
        rec.norm = *norm;
        rec.error = std::strtod(m["error"].c_str(), nullptr);
        rec.model_value = m.count("model_value") ? std::strtod(m["model_value"].c_str(), nullptr) : 0.0;
        out.push_back(std::move(rec));
    }
    return out;
}

int cmd_rates(const StudyConfig& config, std::ostream& out, std::ostream& log) {
    validate(config);
    std::vector<ConvergenceRecord> records;
    if (!config.input.empty()) {
        std::ifstream in(config.input);
        if (!in) throw UsageError("cannot open input '" + config.input + "'");
        records = read_convergence_csv(in);
    } else {
        records = run_convergence(config);
    }
    std::set<int> distinct;
    for (const auto& r : records) distinct.insert(r.n);
    if (distinct.size() < 4)
        throw UsageError("rates needs at least 4 distinct n values, got " + std::to_string(distinct.size()));

    const std::optional<RateModel> model =
        config.model.empty() ? std::nullopt : std::optional<RateModel>(parse_rate_model(config.model));
    const auto fits = fit_rates(records, model);

    std::vector<Row> rows;
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %-10s %-6s %-14s %9s %9s %7s %10s %10s\n", "function", "operator", "norm",
                  "model", "slope", "intercept", "R2", "max_ratio", "min_ratio");
    log << line;
    for (const auto& f : fits) {
        Row r;
        r.add("function", f.function_label);
        r.add("operator", std::string(to_string(f.op)));
        r.add("norm", f.norm.label());
        r.add("model", f.model);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.add("slope", f.fit ? f.fit->slope : nan);
        r.add("intercept", f.fit ? f.fit->intercept : nan);
        r.add("r_squared", f.fit ? f.fit->r_squared : nan);
        r.add("max_ratio", f.fit ? f.fit->max_ratio : nan);
        r.add("min_ratio", f.fit ? f.fit->min_ratio : nan);
        r.add("points", static_cast<long long>(f.fit ? f.fit->points : 0));
        r.add("status", f.fit ? "ok" : "insufficient");
        rows.push_back(std::move(r));
        if (f.fit)
            std::snprintf(line, sizeof line, "%-10s %-10s %-6s %-14s %9.4f %9.4f %7.4f %10.4g %10.4g\n",
                          f.function_label.c_str(), std::string(to_string(f.op)).c_str(), f.norm.label().c_str(),
                          f.model.c_str(), f.fit->slope, f.fit->intercept, f.fit->r_squared, f.fit->max_ratio,
                          f.fit->min_ratio);
        else
            std::snprintf(line, sizeof line, "%-10s %-10s %-6s %-14s  (fewer than 4 usable points)\n",
                          f.function_label.c_str(), std::string(to_string(f.op)).c_str(), f.norm.label().c_str(),
                          f.model.c_str());
        log << line;
    }
    emit(config, out, [&](std::ostream& os) { write_table(os, rows, config.output_format, header_comment("rates", config)); });
    return exit_ok;
}

// ---------------------------------------------------------------------------
// kernels

int cmd_kernels(const StudyConfig& config, std::ostream& out, std::ostream& log) {
    if (config.n_values.size() != 1) throw UsageError("kernels takes exactly one --n value");
    const int n = config.n_values.front();
    if (n < 1) throw UsageError("kernels: n must be >= 1");
    if (config.grid_points < 2) throw UsageError("kernels: grid must have at least 2 points");
    const auto grid = uniform_grid(config.grid_points);
    const KernelTable table = kernel_table(n, grid);
    std::vector<Row> rows;
    double worst = 0.0;
    double leb = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        Row r;
        r.add("t", grid[j]);
        for (int k = 1; k <= n; ++k) r.add("S_" + std::to_string(k), table(k, j));
        const double s = table.column_sum(j);
        const double a = table.column_abs_sum(j);
        r.add("sum", s);
        r.add("lebesgue_sum", a);
        worst = std::max(worst, std::abs(s - 1.0));
        leb = std::max(leb, a);
        rows.push_back(std::move(r));
    }
    emit(config, out, [&](std::ostream& os) { write_table(os, rows, config.output_format, header_comment("kernels", config)); });
    log << "kernels: n=" << n << " max |sum - 1| = " << format_number(worst) << ", max lebesgue_sum = " << format_number(leb)
        << '\n';
    return exit_ok;
}

}  // namespace gd
