#pragma once

// Numerical checks of the kernel identities and bounds, the rate quantities
// (delta_n, moduli of continuity, K-functional upper bounds, m_n) and
// log-log rate fits.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gd/function.hpp"
#include "gd/kernel.hpp"
#include "gd/operators.hpp"
#include "gd/quadrature.hpp"

namespace gd {

// ---------------------------------------------------------------------------
// Kernel identities

struct KernelMassReport {
    int n = 0;
    /// int_0^pi S_{k,n} - pi/n for k = 1..n
    std::vector<double> deviations;
    double max_deviation = 0.0;
};

/// Throws ConfigurationError when rule.panels < 4n unless `allow_under_resolved`.
[[nodiscard]] KernelMassReport verify_kernel_mass(int n, const QuadratureRule& rule,
                                                  bool allow_under_resolved = false);

/// sum_k |S_{k,n}(theta)|
[[nodiscard]] double lebesgue_sum(int n, double theta);

/// max over the grid of sum_k |S_{k,n}|.
[[nodiscard]] double lebesgue_grid_max(int n, std::span<const double> grid);

/// Sign changes of S_{k,n} in (0, pi): bracketed on a 16n-point grid, refined by bisection.
[[nodiscard]] std::vector<double> kernel_sign_changes(int n, int k);

/// Rule on [0, pi] with the default panel density for n, split at the sign
/// changes of S_{k,n}, at theta_k and at any extra breakpoints.
[[nodiscard]] QuadratureRule kernel_split_rule(int n, int k, const QuadratureRule& base,
                                               std::span<const double> extra_breakpoints = {});

/// int_0^pi |S_{k,n}(t)| dt
[[nodiscard]] double kernel_abs_mass(int n, int k, const QuadratureRule& rule);

/// Per-k absolute masses and first absolute moments int |t - theta_k| |S_{k,n}(t)| dt,
/// computed once per n.
class KernelMoments {
public:
    KernelMoments(int n, const QuadratureRule& rule);

    int n() const noexcept { return n_; }
    double abs_mass(int k) const { return abs_mass_[static_cast<std::size_t>(k - 1)]; }
    double moment(int k) const { return moment_[static_cast<std::size_t>(k - 1)]; }
    double max_abs_mass() const;
    double max_moment() const;

private:
    int n_;
    std::vector<double> abs_mass_;
    std::vector<double> moment_;
};

/// delta_n(theta) = (n/pi) sum_k |S_{k,n}(theta)| int_0^pi |t - theta_k| |S_{k,n}(t)| dt
[[nodiscard]] double delta_n(const KernelMoments& moments, double theta);
[[nodiscard]] double delta_n(int n, double theta, const QuadratureRule& rule);

/// The two terms bounding |D_n(f)(theta) - f(theta)|:
///   first  = (n/pi) sum_k |S_{k,n}(theta)| int |f(t) - f(theta_k)| |S_{k,n}(t)| dt
///   second = sum_k |f(theta_k) - f(theta)| |S_{k,n}(theta)|
struct ErrorSplit {
    double first = 0.0;
    double second = 0.0;
    double total() const { return first + second; }
};

class ErrorSplitter {
public:
    ErrorSplitter(int n, const RealFunction& f, const QuadratureRule& rule);
    ErrorSplit at(double theta) const;

private:
    int n_;
    RealFunction f_;
    std::vector<double> local_mass_;  // int |f(t) - f(theta_k)| |S_{k,n}(t)| dt
    std::vector<double> node_values_;
};

// ---------------------------------------------------------------------------
// Moduli of continuity and K-functionals

struct ModulusEstimate {
    double value = 0.0;
    /// delta below the grid spacing: reported as 0.
    bool degenerate = false;
};

/// max |f(s) - f(t)| over pairs of a uniform grid on [a, b] with |s - t| <= delta.
/// A lower bound of the true modulus. Step-tagged functions are rejected.
[[nodiscard]] ModulusEstimate modulus_of_continuity(const RealFunction& f, double delta,
                                                    std::size_t grid_resolution = 4001, double a = 0.0,
                                                    double b = pi);

/// Same estimate from samples on a uniform grid with the given spacing.
[[nodiscard]] ModulusEstimate modulus_of_continuity_samples(std::span<const double> values, double spacing,
                                                            double delta);

/// Terms of the pointwise rate bound at theta, x = cos theta:
///   omega(f, delta_n(theta)) + omega(f o arccos, sqrt(1 - x^2)/n) + omega(f o arccos, 1/n^2)
/// delta_n is floored at one grid step of the modulus grid; `floor_binding` flags when it was.
struct PointwiseRateTerms {
    double delta = 0.0;
    bool floor_binding = false;
    double omega_delta = 0.0;
    double omega_arccos_sqrt = 0.0;
    double omega_arccos_inv_n2 = 0.0;
    double total() const { return omega_delta + omega_arccos_sqrt + omega_arccos_inv_n2; }
};

class PointwiseRateModel {
public:
    PointwiseRateModel(const RealFunction& f, const KernelMoments& moments, std::size_t grid_resolution = 4001);
    PointwiseRateTerms at(double theta) const;

private:
    const KernelMoments* moments_;
    std::vector<double> theta_samples_;
    std::vector<double> arccos_samples_;
    double theta_spacing_;
    double x_spacing_;
};

struct SmoothCandidate {
    /// Steklov mean g(x) = (1/h) int_0^h f_ext(x + u) du, f_ext reflected at 0 and pi.
    RealFunction g;
    /// Certified bound on ||g'||_inf.
    double derivative_sup_bound = 0.0;
    double h = 0.0;
};

/// h must lie in (0, pi/2); f must be continuous, step or generic_lp.
[[nodiscard]] SmoothCandidate steklov_smooth(const RealFunction& f, double h);

struct KCandidate {
    /// 0 for the surrogate g = f (C^1 functions carrying their derivative).
    double h = 0.0;
    double distance = 0.0;  // ||f - g||_p
    double derivative_bound = 0.0;
    double value = 0.0;     // distance + delta * derivative_bound
};

struct KFunctionalEstimate {
    double value = 0.0;
    double best_h = 0.0;
    std::vector<KCandidate> candidates;
};

/// {delta, 2 delta, 4 delta, 8 delta, delta/2}
[[nodiscard]] std::vector<double> default_h_candidates(double delta);

/// Upper bound on K_p(f, delta) = inf_g ||f - g||_p + delta ||g'||_inf: the minimum over
/// Steklov means with radius in `h_candidates` (radii outside (0, pi/2) are skipped) and,
/// when f carries its derivative, g = f itself.
[[nodiscard]] KFunctionalEstimate k_functional_upper(const RealFunction& f, double delta, double p,
                                                     std::span<const double> h_candidates);
[[nodiscard]] KFunctionalEstimate k_functional_upper(const RealFunction& f, double delta, double p);

// ---------------------------------------------------------------------------
// Rate models and fits

/// (1 + log n)/n for p = 1, (1 + log n)/n + n^{-1/p} for 1 < p < inf.
[[nodiscard]] double m_n(int n, double p);

struct RateModel {
    enum class Kind { log_over_n, inv_n_pow, m_n };
    Kind kind = Kind::log_over_n;
    double alpha = 1.0;  // inv_n_pow
    double p = 1.0;      // m_n

    static RateModel log_over_n() { return {Kind::log_over_n, 1.0, 1.0}; }
    static RateModel inv_n_pow(double alpha) { return {Kind::inv_n_pow, alpha, 1.0}; }
    static RateModel mn(double p) { return {Kind::m_n, 1.0, p}; }

    double value(int n) const;
    /// "log_over_n", "inv_n_pow(0.5)", "m_n(2)"
    std::string label() const;
};

/// Accepts the labels produced by RateModel::label.
[[nodiscard]] std::optional<RateModel> parse_rate_model(std::string_view text);

/// The model a study attaches to an error norm: log_over_n for sup, m_n(p) for L^p.
[[nodiscard]] RateModel default_model_for(const Norm& norm);

struct ConvergenceRecord {
    int n = 0;
    std::string function_label;
    OperatorKind op = OperatorKind::durrmeyer;
    Norm norm;
    double error = 0.0;
    double model_value = 0.0;
};

struct FitReport {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_ratio = 0.0;  // max error / model_value
    double min_ratio = 0.0;
    std::size_t points = 0;
};

/// Least squares of log(error) on log(model_value). Records with non-positive or
/// non-finite error are unusable; fewer than 4 usable records with distinct n is a DomainError.
[[nodiscard]] FitReport rate_fit(std::span<const ConvergenceRecord> records);

/// max over consecutive pairs of values[i+1] / values[i].
[[nodiscard]] double max_successive_ratio(std::span<const double> values);

}  // namespace gd
