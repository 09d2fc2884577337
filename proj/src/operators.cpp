#include "gd/operators.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "gd/errors.hpp"

namespace gd {

std::string_view to_string(OperatorKind kind) {
    return kind == OperatorKind::grunwald ? "grunwald" : "durrmeyer";
}

std::optional<OperatorKind> parse_operator_kind(std::string_view text) {
    if (text == "grunwald") return OperatorKind::grunwald;
    if (text == "durrmeyer") return OperatorKind::durrmeyer;
    return std::nullopt;
}

Norm Norm::lp(double p) {
    if (!(p >= 1.0)) throw DomainError("L^p norm requires p >= 1");
    return {Kind::lp, p};
}

std::string Norm::label() const {
    if (kind == Kind::sup_grid) return "sup";
    char buf[32];
    std::snprintf(buf, sizeof buf, "L%g", p);
    return buf;
}

std::optional<Norm> parse_norm(std::string_view text) {
    if (text == "sup" || text == "inf") return Norm::sup();
    if (text.size() < 2 || (text[0] != 'L' && text[0] != 'l')) return std::nullopt;
    double p = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), p);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !(p >= 1.0) || !std::isfinite(p)) return std::nullopt;
    return Norm::lp(p);
}

double lagrange_apply(int n, const RealFunction& f, double t, KernelPath path) {
    CompensatedSum acc;
    for (int k = 1; k <= n; ++k) acc.add(f(chebyshev_angle(n, k)) * lagrange_basis(n, k, t, path));
    return acc.value();
}

double grunwald_apply(int n, const RealFunction& f, double theta, KernelPath path) {
    CompensatedSum acc;
    for (int k = 1; k <= n; ++k) acc.add(f(chebyshev_angle(n, k)) * kernel_eval(n, k, theta, path));
    return acc.value();
}

namespace {

void check_resolution(int n, const QuadratureRule& rule, bool allow_under_resolved) {
    if (!allow_under_resolved && rule.panels < 4 * n)
        throw ConfigurationError("quadrature rule has " + std::to_string(rule.panels) + " panels; degree n=" +
                                 std::to_string(n) + " kernels need at least " + std::to_string(4 * n) +
                                 " (override to force)");
}

}  // namespace

DurrmeyerCoefficients durrmeyer_coefficients(int n, const RealFunction& f, const QuadratureRule& rule,
                                             bool allow_under_resolved) {
    check_resolution(n, rule, allow_under_resolved);
    const KernelTable table = kernel_table(n, rule.nodes);
    std::vector<double> samples(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        samples[i] = f(rule.nodes[i]);
        if (!std::isfinite(samples[i]))
            throw EvaluationError("f is not finite at t=" + std::to_string(rule.nodes[i]), rule.nodes[i]);
    }
    DurrmeyerCoefficients out{n, std::vector<double>(static_cast<std::size_t>(n)), rule.descriptor()};
    const double scale = static_cast<double>(n) / pi;
    for (int k = 1; k <= n; ++k) {
        const auto row = table.row(k);
        CompensatedSum acc;
        for (std::size_t i = 0; i < rule.size(); ++i) acc.add(rule.weights[i] * samples[i] * row[i]);
        out.c[static_cast<std::size_t>(k - 1)] = scale * acc.value();
    }
    return out;
}

double durrmeyer_apply(const DurrmeyerCoefficients& coeffs, double theta, KernelPath path) {
    CompensatedSum acc;
    for (int k = 1; k <= coeffs.n; ++k)
        acc.add(coeffs.c[static_cast<std::size_t>(k - 1)] * kernel_eval(coeffs.n, k, theta, path));
    return acc.value();
}

OperatorWorkspace::OperatorWorkspace(int n, const Resolution& resolution, std::span<const double> breakpoints)
    : OperatorWorkspace(n,
                        build_rule(default_panels(n, resolution.panels_per_n), resolution.points_per_panel,
                                   breakpoints),
                        uniform_grid(resolution.grid_points), resolution.force) {}

OperatorWorkspace::OperatorWorkspace(int n, QuadratureRule rule, std::vector<double> grid, bool allow_under_resolved)
    : n_(n),
      rule_((check_resolution(n, rule, allow_under_resolved), std::move(rule))),
      rule_table_(kernel_table(n, rule_.nodes)),
      grid_table_(kernel_table(n, grid)) {}

std::vector<double> OperatorWorkspace::node_samples(const RealFunction& f) const {
    std::vector<double> out(static_cast<std::size_t>(n_));
    for (int k = 1; k <= n_; ++k) out[static_cast<std::size_t>(k - 1)] = f(chebyshev_angle(n_, k));
    return out;
}

std::vector<double> OperatorWorkspace::rule_samples(const RealFunction& f) const {
    std::vector<double> out(rule_.size());
    for (std::size_t i = 0; i < rule_.size(); ++i) {
        out[i] = f(rule_.nodes[i]);
        if (!std::isfinite(out[i]))
            throw EvaluationError(f.label + " is not finite at t=" + std::to_string(rule_.nodes[i]), rule_.nodes[i]);
    }
    return out;
}

DurrmeyerCoefficients OperatorWorkspace::durrmeyer_coefficients(const RealFunction& f) const {
    return durrmeyer_coefficients_from_samples(rule_samples(f));
}

DurrmeyerCoefficients OperatorWorkspace::durrmeyer_coefficients_from_samples(std::span<const double> f_on_rule) const {
    DurrmeyerCoefficients out{n_, std::vector<double>(static_cast<std::size_t>(n_)), rule_.descriptor()};
    const double scale = static_cast<double>(n_) / pi;
    for (int k = 1; k <= n_; ++k) {
        const auto row = rule_table_.row(k);
        CompensatedSum acc;
        for (std::size_t i = 0; i < rule_.size(); ++i) acc.add(rule_.weights[i] * f_on_rule[i] * row[i]);
        out.c[static_cast<std::size_t>(k - 1)] = scale * acc.value();
    }
    return out;
}

std::vector<double> OperatorWorkspace::weights(OperatorKind kind, const RealFunction& f) const {
    return kind == OperatorKind::grunwald ? node_samples(f) : durrmeyer_coefficients(f).c;
}

std::vector<double> OperatorWorkspace::combine(const KernelTable& table, std::span<const double> weights) {
    std::vector<double> out(table.size(), 0.0);
    for (int k = 1; k <= table.n(); ++k) {
        const double w = weights[static_cast<std::size_t>(k - 1)];
        const auto row = table.row(k);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * row[j];
    }
    return out;
}

std::vector<double> OperatorWorkspace::apply_on_grid(OperatorKind kind, const RealFunction& f) const {
    return combine(grid_table_, weights(kind, f));
}

std::vector<double> OperatorWorkspace::apply_on_rule(OperatorKind kind, const RealFunction& f) const {
    return combine(rule_table_, weights(kind, f));
}

double OperatorWorkspace::error(const RealFunction& f, OperatorKind kind, const Norm& norm) const {
    if (norm.kind == Norm::Kind::sup_grid) {
        auto values = apply_on_grid(kind, f);
        const auto& g = grid();
        for (std::size_t j = 0; j < values.size(); ++j) values[j] -= f(g[j]);
        return sup_norm_values(values);
    }
    const auto samples = rule_samples(f);
    const auto w = kind == OperatorKind::grunwald ? node_samples(f) : durrmeyer_coefficients_from_samples(samples).c;
    auto values = combine(rule_table_, w);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= samples[i];
    return lp_norm_values(rule_, values, norm.p);
}

double OperatorWorkspace::image_norm(const RealFunction& f, OperatorKind kind, const Norm& norm) const {
    if (norm.kind == Norm::Kind::sup_grid) return sup_norm_values(apply_on_grid(kind, f));
    return lp_norm_values(rule_, apply_on_rule(kind, f), norm.p);
}

double OperatorWorkspace::function_norm(const RealFunction& f, const Norm& norm) const {
    if (norm.kind == Norm::Kind::sup_grid) return sup_norm_on_grid(f, grid());
    return lp_norm_values(rule_, rule_samples(f), norm.p);
}

double operator_error(int n, const RealFunction& f, OperatorKind kind, const Norm& norm, const Resolution& resolution) {
    const auto breaks = f.breakpoints();
    const OperatorWorkspace ws(n, resolution, breaks);
    return ws.error(f, kind, norm);
}

}  // namespace gd
