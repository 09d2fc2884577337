#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gd/constants.hpp"
#include "gd/errors.hpp"
#include "gd/function.hpp"

namespace gd {

/// Composite Gauss-Legendre rule. Nodes are sorted and interior to the panels
/// delimited by `edges`.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::vector<double> edges;
    int panels = 0;
    int points_per_panel = 0;

    std::size_t size() const noexcept { return nodes.size(); }
    double lower() const { return edges.front(); }
    double upper() const { return edges.back(); }
    /// e.g. "gauss-legendre[panels=64,points=10,interval=[0,3.1415926535897931]]"
    std::string descriptor() const;
};

/// Nodes and weights of the m-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] GaussLegendre gauss_legendre(int points);

/// Equal panels on [0, pi].
[[nodiscard]] QuadratureRule build_rule(int panels, int points_per_panel);

/// Equal panels on [0, pi], additionally split at every breakpoint in (0, pi).
[[nodiscard]] QuadratureRule build_rule(int panels, int points_per_panel, std::span<const double> breakpoints);

/// Rule over explicit panel edges (sorted, at least two distinct values).
[[nodiscard]] QuadratureRule build_rule_on_edges(std::vector<double> edges, int points_per_panel);

/// panels = max(64, panels_per_n * n); the resolution used for degree-n kernels.
[[nodiscard]] int default_panels(int n, int panels_per_n = 4);
inline constexpr int default_points_per_panel = 10;
[[nodiscard]] QuadratureRule default_rule(int n, std::span<const double> breakpoints = {});

/// Neumaier-compensated sum, evaluated left to right.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// sum_i w_i values[i]
[[nodiscard]] double integrate_values(const QuadratureRule& rule, std::span<const double> values);

template <class F>
[[nodiscard]] double integrate_fn(const QuadratureRule& rule, F&& f) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v))
            throw EvaluationError("integrand is not finite at t=" + std::to_string(rule.nodes[i]), rule.nodes[i]);
        acc.add(rule.weights[i] * v);
    }
    return acc.value();
}

[[nodiscard]] double integrate(const QuadratureRule& rule, const RealFunction& f);

/// (int |f|^p)^{1/p} with un-normalized Lebesgue measure; p = +inf gives the max over nodes.
[[nodiscard]] double lp_norm(const QuadratureRule& rule, const RealFunction& f, double p);
[[nodiscard]] double lp_norm_values(const QuadratureRule& rule, std::span<const double> values, double p);

/// max over the grid of |f|. A lower bound of the true sup-norm.
[[nodiscard]] double sup_norm_on_grid(const RealFunction& f, std::span<const double> grid);
[[nodiscard]] double sup_norm_values(std::span<const double> values);

/// `points` equispaced abscissae on [a, b] including both endpoints.
[[nodiscard]] std::vector<double> uniform_grid(std::size_t points, double a = 0.0, double b = pi);

/// Principal value of int_0^pi cos(n u) / (cos u - cos theta) du, theta in (0, pi).
/// Computed by excluding (theta - eps, theta + eps) for eps in {1e-2, 1e-3, 1e-4}
/// and Richardson-extrapolating the odd-power expansion in eps.
struct PrincipalValueEstimate {
    std::array<double, 3> eps{};
    std::array<double, 3> truncated{};  // integral with the window removed
    double extrapolated = 0.0;
};
[[nodiscard]] PrincipalValueEstimate cosine_kernel_principal_value(int n, double theta);

/// Closed form pi sin(n theta) / sin(theta).
[[nodiscard]] double cosine_kernel_principal_value_exact(int n, double theta);

}  // namespace gd
