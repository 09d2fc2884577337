#include "gd/quadrature.hpp"

#include <algorithm>
#include <cstdio>
#include <utility>

namespace gd {

std::string QuadratureRule::descriptor() const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "gauss-legendre[panels=%d,points=%d,interval=[%.17g,%.17g]]", panels,
                  points_per_panel, lower(), upper());
    return buf;
}

namespace {

// P_m(x) and P_{m-1}(x) by the three-term recurrence.
std::pair<double, double> legendre_pair(std::size_t m, double x) {
    double prev = 1.0;
    double cur = x;
    for (std::size_t j = 2; j <= m; ++j) {
        const double jj = static_cast<double>(j);
        const double next = ((2.0 * jj - 1.0) * x * cur - (jj - 1.0) * prev) / jj;
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

}  // namespace

GaussLegendre gauss_legendre(int points) {
    if (points < 1) throw DomainError("gauss_legendre: need at least one point");
    if (points == 1) return {{0.0}, {2.0}};
    const auto m = static_cast<std::size_t>(points);
    const double md = static_cast<double>(m);
    GaussLegendre gl;
    gl.nodes.resize(m);
    gl.weights.resize(m);
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (md + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, q] = legendre_pair(m, x);
            const double dp = md * (x * p - q) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const auto [p, q] = legendre_pair(m, x);
        const double dp = md * (x * p - q) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.nodes[i] = -x;
        gl.nodes[m - 1 - i] = x;
        gl.weights[i] = w;
        gl.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) gl.nodes[m / 2] = 0.0;
    return gl;
}

QuadratureRule build_rule_on_edges(std::vector<double> edges, int points_per_panel) {
    if (points_per_panel < 1) throw DomainError("build_rule: points_per_panel must be >= 1");
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.size() < 2) throw DomainError("build_rule: need at least one panel");

    const GaussLegendre gl = gauss_legendre(points_per_panel);
    QuadratureRule rule;
    rule.panels = static_cast<int>(edges.size() - 1);
    rule.points_per_panel = points_per_panel;
    rule.nodes.reserve(static_cast<std::size_t>(rule.panels) * gl.nodes.size());
    rule.weights.reserve(rule.nodes.capacity());
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
            rule.nodes.push_back(mid + half * gl.nodes[i]);
            rule.weights.push_back(half * gl.weights[i]);
        }
    }
    rule.edges = std::move(edges);
    return rule;
}

QuadratureRule build_rule(int panels, int points_per_panel) { return build_rule(panels, points_per_panel, {}); }

QuadratureRule build_rule(int panels, int points_per_panel, std::span<const double> breakpoints) {
    if (panels < 1) throw DomainError("build_rule: panels must be >= 1");
    if (points_per_panel < 2) throw DomainError("build_rule: points_per_panel must be >= 2");
    std::vector<double> edges(static_cast<std::size_t>(panels) + 1);
    for (int i = 0; i <= panels; ++i) edges[static_cast<std::size_t>(i)] = pi * i / panels;
    edges.back() = pi;
    const double merge_tol = 1e-12;
    for (double b : breakpoints) {
        if (!(b > 0.0 && b < pi)) continue;
        const auto it = std::lower_bound(edges.begin(), edges.end(), b);
        const bool near_upper = it != edges.end() && std::abs(*it - b) < merge_tol;
        const bool near_lower = it != edges.begin() && std::abs(*(it - 1) - b) < merge_tol;
        if (!near_upper && !near_lower) edges.insert(it, b);
    }
    return build_rule_on_edges(std::move(edges), points_per_panel);
}

int default_panels(int n, int panels_per_n) { return std::max(64, panels_per_n * n); }

QuadratureRule default_rule(int n, std::span<const double> breakpoints) {
    return build_rule(default_panels(n), default_points_per_panel, breakpoints);
}

double integrate_values(const QuadratureRule& rule, std::span<const double> values) {
    if (values.size() != rule.size()) throw DomainError("integrate_values: size mismatch");
    CompensatedSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) acc.add(rule.weights[i] * values[i]);
    return acc.value();
}

double integrate(const QuadratureRule& rule, const RealFunction& f) { return integrate_fn(rule, f.evaluator); }

double lp_norm_values(const QuadratureRule& rule, std::span<const double> values, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
    if (values.size() != rule.size()) throw DomainError("lp_norm: size mismatch");
    if (std::isinf(p)) return sup_norm_values(values);
    CompensatedSum acc;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double a = std::abs(values[i]);
        acc.add(rule.weights[i] * (p == 1.0 ? a : p == 2.0 ? a * a : std::pow(a, p)));
    }
    const double s = std::max(acc.value(), 0.0);
    return p == 1.0 ? s : p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double lp_norm(const QuadratureRule& rule, const RealFunction& f, double p) {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
    std::vector<double> values(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        values[i] = f(rule.nodes[i]);
        if (!std::isfinite(values[i]))
            throw EvaluationError("lp_norm: f is not finite at t=" + std::to_string(rule.nodes[i]), rule.nodes[i]);
    }
    return lp_norm_values(rule, values, p);
}

double sup_norm_values(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm_on_grid(const RealFunction& f, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("sup_norm_on_grid: empty grid");
    double m = 0.0;
    for (double t : grid) m = std::max(m, std::abs(f(t)));
    return m;
}

std::vector<double> uniform_grid(std::size_t points, double a, double b) {
    if (points == 0) throw DomainError("uniform_grid: need at least one point");
    if (points == 1) return {0.5 * (a + b)};
    std::vector<double> g(points);
    const double last = static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = a + (b - a) * (static_cast<double>(i) / last);
    g.front() = a;
    g.back() = b;
    return g;
}

namespace {

// Edges from `near` towards `far` with geometrically growing spacing starting at `first`,
// capped at `max_width`.
std::vector<double> graded_edges(double near, double far, double first, double max_width) {
    std::vector<double> e{near};
    const double dir = far > near ? 1.0 : -1.0;
    const double span = std::abs(far - near);
    double d = 0.0;
    double w = first;
    while (d + w < span) {
        d += w;
        e.push_back(near + dir * d);
        w = std::min(2.0 * w, max_width);
    }
    e.push_back(far);
    return e;
}

}  // namespace

PrincipalValueEstimate cosine_kernel_principal_value(int n, double theta) {
    if (!(theta > 0.0 && theta < pi)) throw DomainError("principal value requires theta in (0, pi)");
    const double nn = static_cast<double>(n);
    // cos u - cos theta = -2 sin((u + theta)/2) sin((u - theta)/2)
    auto integrand = [&](double u) {
        return std::cos(nn * u) / (-2.0 * std::sin(0.5 * (u + theta)) * std::sin(0.5 * (u - theta)));
    };
    PrincipalValueEstimate est;
    est.eps = {1e-2, 1e-3, 1e-4};
    const double max_width = std::min(0.05, 0.5 / std::max(nn, 1.0));
    for (std::size_t i = 0; i < est.eps.size(); ++i) {
        const double eps = est.eps[i];
        double total = 0.0;
        if (theta - eps > 0.0) {
            const auto rule = build_rule_on_edges(graded_edges(theta - eps, 0.0, eps, max_width), 12);
            total += integrate_fn(rule, integrand);
        }
        if (theta + eps < pi) {
            const auto rule = build_rule_on_edges(graded_edges(theta + eps, pi, eps, max_width), 12);
            total += integrate_fn(rule, integrand);
        }
        est.truncated[i] = total;
    }
    // I(eps) = PV + a1 eps + a3 eps^3 + ...; ratios of 10 between successive eps
    const double r1a = (10.0 * est.truncated[1] - est.truncated[0]) / 9.0;
    const double r1b = (10.0 * est.truncated[2] - est.truncated[1]) / 9.0;
    est.extrapolated = (1000.0 * r1b - r1a) / 999.0;
    return est;
}

double cosine_kernel_principal_value_exact(int n, double theta) {
    return pi * std::sin(static_cast<double>(n) * theta) / std::sin(theta);
}

}  // namespace gd
