#include "gd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "gd/errors.hpp"

namespace gd {

namespace {

void require_resolution(int n, const QuadratureRule& rule, bool allow) {
    if (!allow && rule.panels < 4 * n)
        throw ConfigurationError("quadrature rule has " + std::to_string(rule.panels) + " panels, need >= " +
                                 std::to_string(4 * n) + " for n=" + std::to_string(n));
}

// Sorted edges with near-duplicates (closer than tol) merged.
std::vector<double> merge_edges(std::vector<double> edges, double lo, double hi, double tol = 1e-12) {
    std::sort(edges.begin(), edges.end());
    std::vector<double> out;
    for (double e : edges) {
        if (e < lo || e > hi) continue;
        if (out.empty() || e - out.back() > tol) out.push_back(e);
    }
    return out;
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

KernelMassReport verify_kernel_mass(int n, const QuadratureRule& rule, bool allow_under_resolved) {
    require_resolution(n, rule, allow_under_resolved);
    KernelMassReport report;
    report.n = n;
    const KernelTable table = kernel_table(n, rule.nodes);
    const double target = pi / static_cast<double>(n);
    for (int k = 1; k <= n; ++k) {
        const auto row = table.row(k);
        const double mass = integrate_values(rule, row);
        report.deviations.push_back(mass - target);
        report.max_deviation = std::max(report.max_deviation, std::abs(mass - target));
    }
    return report;
}

double lebesgue_sum(int n, double theta) {
    CompensatedSum acc;
    for (int k = 1; k <= n; ++k) acc.add(std::abs(kernel_eval(n, k, theta)));
    return acc.value();
}

double lebesgue_grid_max(int n, std::span<const double> grid) {
    const KernelTable table = kernel_table(n, grid);
    double worst = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) worst = std::max(worst, table.column_abs_sum(j));
    return worst;
}

std::vector<double> kernel_sign_changes(int n, int k) {
    const KernelFunction s(n, k);
    const std::size_t points = 16 * static_cast<std::size_t>(n) + 1;
    const auto grid = uniform_grid(points);
    const auto values = s.values(grid);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < points; ++i) {
        const double a = values[i];
        const double b = values[i + 1];
        if (a == 0.0) {
            if (i > 0) roots.push_back(grid[i]);
            continue;
        }
        if (sign_of(a) * sign_of(b) >= 0.0) continue;
        double lo = grid[i];
        double hi = grid[i + 1];
        double flo = a;
        for (int iter = 0; iter < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon(); ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double fm = s(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if (sign_of(fm) == sign_of(flo)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

QuadratureRule kernel_split_rule(int n, int k, const QuadratureRule& base, std::span<const double> extra_breakpoints) {
    std::vector<double> edges = base.edges;
    const auto roots = kernel_sign_changes(n, k);
    edges.insert(edges.end(), roots.begin(), roots.end());
    edges.push_back(chebyshev_angle(n, k));
    edges.insert(edges.end(), extra_breakpoints.begin(), extra_breakpoints.end());
    return build_rule_on_edges(merge_edges(std::move(edges), base.lower(), base.upper()), base.points_per_panel);
}

double kernel_abs_mass(int n, int k, const QuadratureRule& rule) {
    require_resolution(n, rule, false);
    const QuadratureRule split = kernel_split_rule(n, k, rule);
    const KernelFunction s(n, k);
    return integrate_fn(split, [&](double t) { return std::abs(s(t)); });
}

KernelMoments::KernelMoments(int n, const QuadratureRule& rule)
    : n_(n), abs_mass_(static_cast<std::size_t>(n)), moment_(static_cast<std::size_t>(n)) {
    require_resolution(n, rule, false);
    // S_{n+1-k,n}(pi - t) = S_{k,n}(t): only the first half needs quadrature.
    for (int k = 1; k <= (n + 1) / 2; ++k) {
        const QuadratureRule split = kernel_split_rule(n, k, rule);
        const KernelFunction s(n, k);
        const double theta_k = chebyshev_angle(n, k);
        const auto values = s.values(split.nodes);
        CompensatedSum mass;
        CompensatedSum moment;
        for (std::size_t i = 0; i < split.size(); ++i) {
            const double a = std::abs(values[i]);
            mass.add(split.weights[i] * a);
            moment.add(split.weights[i] * std::abs(split.nodes[i] - theta_k) * a);
        }
        const auto lo = static_cast<std::size_t>(k - 1);
        const auto hi = static_cast<std::size_t>(n - k);
        abs_mass_[lo] = abs_mass_[hi] = mass.value();
        moment_[lo] = moment_[hi] = moment.value();
    }
}

double KernelMoments::max_abs_mass() const { return *std::max_element(abs_mass_.begin(), abs_mass_.end()); }
double KernelMoments::max_moment() const { return *std::max_element(moment_.begin(), moment_.end()); }

double delta_n(const KernelMoments& moments, double theta) {
    const int n = moments.n();
    CompensatedSum acc;
    for (int k = 1; k <= n; ++k) acc.add(std::abs(kernel_eval(n, k, theta)) * moments.moment(k));
    return static_cast<double>(n) / pi * acc.value();
}

double delta_n(int n, double theta, const QuadratureRule& rule) { return delta_n(KernelMoments(n, rule), theta); }

ErrorSplitter::ErrorSplitter(int n, const RealFunction& f, const QuadratureRule& rule)
    : n_(n), f_(f), local_mass_(static_cast<std::size_t>(n)), node_values_(static_cast<std::size_t>(n)) {
    require_resolution(n, rule, false);
    const auto breaks = f.breakpoints();
    for (int k = 1; k <= n; ++k) {
        const double fk = f(chebyshev_angle(n, k));
        node_values_[static_cast<std::size_t>(k - 1)] = fk;
        const QuadratureRule split = kernel_split_rule(n, k, rule, breaks);
        const KernelFunction s(n, k);
        local_mass_[static_cast<std::size_t>(k - 1)] =
            integrate_fn(split, [&](double t) { return std::abs(f(t) - fk) * std::abs(s(t)); });
    }
}

ErrorSplit ErrorSplitter::at(double theta) const {
    const double ft = f_(theta);
    CompensatedSum first;
    CompensatedSum second;
    for (int k = 1; k <= n_; ++k) {
        const double s = std::abs(kernel_eval(n_, k, theta));
        first.add(s * local_mass_[static_cast<std::size_t>(k - 1)]);
        second.add(s * std::abs(node_values_[static_cast<std::size_t>(k - 1)] - ft));
    }
    return {static_cast<double>(n_) / pi * first.value(), second.value()};
}

ModulusEstimate modulus_of_continuity_samples(std::span<const double> values, double spacing, double delta) {
    if (!(delta > 0.0)) throw DomainError("modulus_of_continuity: delta must be positive");
    if (values.size() < 2) return {0.0, true};
    const double steps = delta / spacing;
    if (steps < 1.0 - 1e-9) return {0.0, true};
    const std::size_t window = std::min(values.size() - 1, static_cast<std::size_t>(std::floor(steps + 1e-9)));
    // max - min over every run of window+1 consecutive samples, via monotone deques
    std::deque<std::size_t> maxq;
    std::deque<std::size_t> minq;
    double best = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        while (!maxq.empty() && values[maxq.back()] <= values[i]) maxq.pop_back();
        while (!minq.empty() && values[minq.back()] >= values[i]) minq.pop_back();
        maxq.push_back(i);
        minq.push_back(i);
        if (maxq.front() + window < i) maxq.pop_front();
        if (minq.front() + window < i) minq.pop_front();
        best = std::max(best, values[maxq.front()] - values[minq.front()]);
    }
    return {best, false};
}

ModulusEstimate modulus_of_continuity(const RealFunction& f, double delta, std::size_t grid_resolution, double a,
                                      double b) {
    if (f.smoothness == Smoothness::step)
        throw DomainError("modulus_of_continuity: " + f.label + " is tagged discontinuous");
    if (!(delta > 0.0)) throw DomainError("modulus_of_continuity: delta must be positive");
    if (grid_resolution < 2) throw DomainError("modulus_of_continuity: grid needs at least two points");
    const auto grid = uniform_grid(grid_resolution, a, b);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);
    return modulus_of_continuity_samples(values, (b - a) / static_cast<double>(grid_resolution - 1), delta);
}

PointwiseRateModel::PointwiseRateModel(const RealFunction& f, const KernelMoments& moments,
                                       std::size_t grid_resolution)
    : moments_(&moments) {
    if (!f.is_continuous()) throw DomainError("pointwise rate model needs a continuous function, got " + f.label);
    if (grid_resolution < 2) throw DomainError("pointwise rate model: grid needs at least two points");
    const auto thetas = uniform_grid(grid_resolution);
    const auto xs = uniform_grid(grid_resolution, -1.0, 1.0);
    theta_samples_.resize(grid_resolution);
    arccos_samples_.resize(grid_resolution);
    for (std::size_t i = 0; i < grid_resolution; ++i) {
        theta_samples_[i] = f(thetas[i]);
        arccos_samples_[i] = f(std::acos(std::clamp(xs[i], -1.0, 1.0)));
    }
    theta_spacing_ = pi / static_cast<double>(grid_resolution - 1);
    x_spacing_ = 2.0 / static_cast<double>(grid_resolution - 1);
}

PointwiseRateTerms PointwiseRateModel::at(double theta) const {
    PointwiseRateTerms terms;
    const double n = static_cast<double>(moments_->n());
    terms.delta = delta_n(*moments_, theta);
    if (terms.delta < theta_spacing_) {
        terms.delta = theta_spacing_;
        terms.floor_binding = true;
    }
    terms.omega_delta = modulus_of_continuity_samples(theta_samples_, theta_spacing_, terms.delta).value;
    const double x = std::cos(theta);
    const double sqrt_radius = std::sqrt(std::max(0.0, 1.0 - x * x)) / n;
    if (sqrt_radius > 0.0)
        terms.omega_arccos_sqrt = modulus_of_continuity_samples(arccos_samples_, x_spacing_, sqrt_radius).value;
    terms.omega_arccos_inv_n2 = modulus_of_continuity_samples(arccos_samples_, x_spacing_, 1.0 / (n * n)).value;
    return terms;
}

namespace {

double reflect(const RealFunction& f, double y) {
    if (y < 0.0) return f(-y);
    if (y > pi) return f(2.0 * pi - y);
    return f(y);
}

// Abscissae where f_ext loses smoothness: 0, pi and the (reflected) breakpoints of f.
std::vector<double> extended_breakpoints(const RealFunction& f) {
    std::vector<double> out{0.0, pi};
    for (double b : f.breakpoints()) {
        out.push_back(b);
        out.push_back(-b);
        out.push_back(2.0 * pi - b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

SmoothCandidate steklov_smooth(const RealFunction& f, double h) {
    if (!(h > 0.0 && h < pi / 2)) throw DomainError("steklov_smooth: h must lie in (0, pi/2)");
    const auto gl = gauss_legendre(10);
    const auto ext_breaks = extended_breakpoints(f);

    auto mean = [f, h, gl, ext_breaks](double x) {
        std::vector<double> edges{x, x + h};
        for (double b : ext_breaks)
            if (b > x && b < x + h) edges.push_back(b);
        std::sort(edges.begin(), edges.end());
        double acc = 0.0;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
            const double mid = 0.5 * (edges[p] + edges[p + 1]);
            const double half = 0.5 * (edges[p + 1] - edges[p]);
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) acc += half * gl.weights[i] * reflect(f, mid + half * gl.nodes[i]);
        }
        return acc / h;
    };
    auto slope = [f, h](double x) { return (reflect(f, x + h) - reflect(f, x)) / h; };

    SmoothCandidate out;
    out.h = h;
    out.g.label = f.label + "_steklov";
    out.g.evaluator = mean;
    out.g.derivative = slope;
    for (double b : ext_breaks) {
        if (b > 0.0 && b < pi) out.g.kinks.push_back(b);
        if (b - h > 0.0 && b - h < pi) out.g.kinks.push_back(b - h);
    }
    std::sort(out.g.kinks.begin(), out.g.kinks.end());
    out.g.kinks.erase(std::unique(out.g.kinks.begin(), out.g.kinks.end()), out.g.kinks.end());

    // g'(x) = (f_ext(x + h) - f_ext(x)) / h exactly; sample it densely and
    // widen by the largest jump between neighbouring samples.
    double sampled = 0.0;
    double jump = 0.0;
    double previous = slope(0.0);
    for (double x : uniform_grid(2001)) {
        const double s = slope(x);
        sampled = std::max(sampled, std::abs(s));
        jump = std::max(jump, std::abs(s - previous));
        previous = s;
    }
    double bound = sampled + jump;
    if (f.is_continuous()) bound = std::max(bound, modulus_of_continuity(f, h).value / h);
    out.derivative_sup_bound = bound;
    out.g.smoothness = f.is_continuous() ? Smoothness::c1 : Smoothness::lipschitz;
    out.g.lipschitz_constant = bound;
    return out;
}

std::vector<double> default_h_candidates(double delta) {
    return {delta, 2.0 * delta, 4.0 * delta, 8.0 * delta, 0.5 * delta};
}

KFunctionalEstimate k_functional_upper(const RealFunction& f, double delta, double p) {
    const auto hs = default_h_candidates(delta);
    return k_functional_upper(f, delta, p, hs);
}

KFunctionalEstimate k_functional_upper(const RealFunction& f, double delta, double p,
                                       std::span<const double> h_candidates) {
    if (!(delta > 0.0)) throw DomainError("k_functional_upper: delta must be positive");
    if (!(p >= 1.0)) throw DomainError("k_functional_upper: p must be >= 1");
    if (h_candidates.empty()) throw DomainError("k_functional_upper: no smoothing radii given");

    KFunctionalEstimate est;
    est.value = std::numeric_limits<double>::infinity();
    auto consider = [&](const KCandidate& c) {
        est.candidates.push_back(c);
        if (c.value < est.value) {
            est.value = c.value;
            est.best_h = c.h;
        }
    };

    if (f.has_derivative()) {
        double bound = 0.0;
        for (double x : uniform_grid(2001)) bound = std::max(bound, std::abs(f.derivative(x)));
        consider({0.0, 0.0, bound, delta * bound});
    }
    const auto f_breaks = f.breakpoints();
    for (double h : h_candidates) {
        if (!(h > 0.0 && h < pi / 2)) continue;
        const SmoothCandidate cand = steklov_smooth(f, h);
        std::vector<double> breaks = f_breaks;
        breaks.insert(breaks.end(), cand.g.kinks.begin(), cand.g.kinks.end());
        const QuadratureRule rule = build_rule(512, default_points_per_panel, breaks);
        std::vector<double> diff(rule.size());
        for (std::size_t i = 0; i < rule.size(); ++i) diff[i] = f(rule.nodes[i]) - cand.g(rule.nodes[i]);
        const double dist = lp_norm_values(rule, diff, p);
        consider({h, dist, cand.derivative_sup_bound, dist + delta * cand.derivative_sup_bound});
    }
    if (est.candidates.empty()) throw DomainError("k_functional_upper: every smoothing radius lies outside (0, pi/2)");
    return est;
}

double m_n(int n, double p) {
    if (n < 1) throw DomainError("m_n: n must be >= 1");
    if (!(p >= 1.0) || std::isinf(p)) throw DomainError("m_n: p must satisfy 1 <= p < inf");
    const double nn = static_cast<double>(n);
    const double base = (1.0 + std::log(nn)) / nn;
    return p == 1.0 ? base : base + std::pow(nn, -1.0 / p);
}

double RateModel::value(int n) const {
    const double nn = static_cast<double>(n);
    switch (kind) {
        case Kind::log_over_n: return (1.0 + std::log(nn)) / nn;
        case Kind::inv_n_pow: return std::pow(nn, -alpha);
        case Kind::m_n: return gd::m_n(n, p);
    }
    return 0.0;
}

std::string RateModel::label() const {
    char buf[48];
    switch (kind) {
        case Kind::log_over_n: return "log_over_n";
        case Kind::inv_n_pow: std::snprintf(buf, sizeof buf, "inv_n_pow(%g)", alpha); return buf;
        case Kind::m_n: std::snprintf(buf, sizeof buf, "m_n(%g)", p); return buf;
    }
    return "unknown";
}

std::optional<RateModel> parse_rate_model(std::string_view text) {
    if (text == "log_over_n") return RateModel::log_over_n();
    auto parse_arg = [&](std::string_view prefix) -> std::optional<double> {
        if (text.size() <= prefix.size() + 1 || text.substr(0, prefix.size()) != prefix || text.back() != ')')
            return std::nullopt;
        const std::string inner(text.substr(prefix.size(), text.size() - prefix.size() - 1));
        char* end = nullptr;
        const double v = std::strtod(inner.c_str(), &end);
        if (end == inner.c_str() || *end != '\0' || !std::isfinite(v)) return std::nullopt;
        return v;
    };
    if (auto a = parse_arg("inv_n_pow(")) return RateModel::inv_n_pow(*a);
    if (auto q = parse_arg("m_n(")) {
        if (*q < 1.0) return std::nullopt;
        return RateModel::mn(*q);
    }
    return std::nullopt;
}

RateModel default_model_for(const Norm& norm) {
    return norm.kind == Norm::Kind::sup_grid ? RateModel::log_over_n() : RateModel::mn(norm.p);
}

FitReport rate_fit(std::span<const ConvergenceRecord> records) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::set<int> distinct_n;
    FitReport fit;
    fit.max_ratio = 0.0;
    fit.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : records) {
        if (!(r.error > 0.0) || !std::isfinite(r.error) || !(r.model_value > 0.0)) continue;
        xs.push_back(std::log(r.model_value));
        ys.push_back(std::log(r.error));
        distinct_n.insert(r.n);
        const double ratio = r.error / r.model_value;
        fit.max_ratio = std::max(fit.max_ratio, ratio);
        fit.min_ratio = std::min(fit.min_ratio, ratio);
    }
    if (distinct_n.size() < 4)
        throw DomainError("rate_fit: need at least 4 usable records with distinct n, got " +
                          std::to_string(distinct_n.size()));
    const double m = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) throw DomainError("rate_fit: model values do not vary");
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    // Flat errors (up to rounding) are fitted exactly by slope 0.
    const bool flat = syy <= 1e-20 * m * std::max(1.0, my * my);
    fit.r_squared = flat ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
    fit.points = xs.size();
    return fit;
}

double max_successive_ratio(std::span<const double> values) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) worst = std::max(worst, values[i + 1] / values[i]);
    return worst;
}

}  // namespace gd
