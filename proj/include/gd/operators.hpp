#pragma once

// Lagrange L_n, Grunwald G_n and Grunwald-Durrmeyer D_n operators on [0, pi]:
//
//   L_n(f)(t)     = sum_k f(theta_k) P_k(t)
//   G_n(f)(theta) = sum_k f(theta_k) S_{k,n}(theta)
//   D_n(f)(theta) = (n/pi) sum_k S_{k,n}(theta) int_0^pi f(t) S_{k,n}(t) dt
//
// Functions are sampled in the angular variable, f(theta_k), throughout.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gd/function.hpp"
#include "gd/kernel.hpp"
#include "gd/quadrature.hpp"

namespace gd {

enum class OperatorKind { grunwald, durrmeyer };

[[nodiscard]] std::string_view to_string(OperatorKind kind);
[[nodiscard]] std::optional<OperatorKind> parse_operator_kind(std::string_view text);

/// Error norm: max over the evaluation grid, or the L^p norm via quadrature.
struct Norm {
    enum class Kind { sup_grid, lp };
    Kind kind = Kind::sup_grid;
    double p = 0.0;

    static Norm sup() { return {Kind::sup_grid, 0.0}; }
    static Norm lp(double p);

    /// "sup", "L1", "L2", "L4", "L1.5"
    std::string label() const;
    friend bool operator==(const Norm&, const Norm&) = default;
};

/// Accepts "sup", "inf", "L<p>" or "l<p>".
[[nodiscard]] std::optional<Norm> parse_norm(std::string_view text);

struct Resolution {
    int panels_per_n = 4;
    int points_per_panel = default_points_per_panel;
    std::size_t grid_points = 2001;
    /// Permit panels < 4n.
    bool force = false;
};

[[nodiscard]] double lagrange_apply(int n, const RealFunction& f, double t, KernelPath path = KernelPath::series);
[[nodiscard]] double grunwald_apply(int n, const RealFunction& f, double theta,
                                    KernelPath path = KernelPath::series);

struct DurrmeyerCoefficients {
    int n = 0;
    /// c[k-1] = (n/pi) int_0^pi f(t) S_{k,n}(t) dt
    std::vector<double> c;
    std::string rule_descriptor;
};

/// Throws ConfigurationError when rule.panels < 4n and `allow_under_resolved` is false.
[[nodiscard]] DurrmeyerCoefficients durrmeyer_coefficients(int n, const RealFunction& f, const QuadratureRule& rule,
                                                           bool allow_under_resolved = false);

/// sum_k c[k-1] S_{k,n}(theta)
[[nodiscard]] double durrmeyer_apply(const DurrmeyerCoefficients& coeffs, double theta,
                                     KernelPath path = KernelPath::series);

/// Kernel tables for one n on a quadrature rule and on the sup-norm grid,
/// shared across every function and norm evaluated at that n.
class OperatorWorkspace {
public:
    OperatorWorkspace(int n, const Resolution& resolution, std::span<const double> breakpoints = {});
    OperatorWorkspace(int n, QuadratureRule rule, std::vector<double> grid, bool allow_under_resolved = false);

    int n() const noexcept { return n_; }
    const QuadratureRule& rule() const noexcept { return rule_; }
    const std::vector<double>& grid() const noexcept { return grid_table_.grid(); }
    const KernelTable& rule_table() const noexcept { return rule_table_; }
    const KernelTable& grid_table() const noexcept { return grid_table_; }

    /// f at the Chebyshev angles.
    std::vector<double> node_samples(const RealFunction& f) const;
    /// f at the quadrature nodes; throws EvaluationError on non-finite values.
    std::vector<double> rule_samples(const RealFunction& f) const;

    DurrmeyerCoefficients durrmeyer_coefficients(const RealFunction& f) const;
    DurrmeyerCoefficients durrmeyer_coefficients_from_samples(std::span<const double> f_on_rule) const;

    /// Per-k weights applied to the kernels: f(theta_k) for G_n, c_k for D_n.
    std::vector<double> weights(OperatorKind kind, const RealFunction& f) const;

    std::vector<double> apply_on_grid(OperatorKind kind, const RealFunction& f) const;
    std::vector<double> apply_on_rule(OperatorKind kind, const RealFunction& f) const;

    /// ||Op_n(f) - f|| in the requested norm.
    double error(const RealFunction& f, OperatorKind kind, const Norm& norm) const;
    /// ||Op_n(f)|| and ||f|| in the requested norm.
    double image_norm(const RealFunction& f, OperatorKind kind, const Norm& norm) const;
    double function_norm(const RealFunction& f, const Norm& norm) const;

private:
    static std::vector<double> combine(const KernelTable& table, std::span<const double> weights);

    int n_;
    QuadratureRule rule_;
    KernelTable rule_table_;
    KernelTable grid_table_;
};

/// ||Op_n(f) - f|| at the given resolution; the quadrature rule is aligned to f's breakpoints.
[[nodiscard]] double operator_error(int n, const RealFunction& f, OperatorKind kind, const Norm& norm,
                                    const Resolution& resolution = {});

}  // namespace gd
