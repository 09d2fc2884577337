#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gd {

enum class Smoothness { continuous, lipschitz, c1, step, generic_lp };

[[nodiscard]] std::string_view to_string(Smoothness s);

/// A real function on [0, pi] with a declared smoothness class.
///
/// Evaluators must be pure and reentrant. For `step` functions the declared
/// discontinuities are used to align quadrature panels; `c1` functions may
/// carry their derivative, which the K-functional estimator uses directly.
struct RealFunction {
    std::string label;
    Smoothness smoothness = Smoothness::continuous;
    std::function<double(double)> evaluator;
    double lipschitz_constant = 0.0;      // meaningful for Smoothness::lipschitz
    std::vector<double> discontinuities;  // meaningful for Smoothness::step
    std::vector<double> kinks;            // derivative jumps or singularities
    std::function<double(double)> derivative;

    double operator()(double t) const { return evaluator(t); }

    bool is_continuous() const noexcept {
        return smoothness == Smoothness::continuous || smoothness == Smoothness::lipschitz ||
               smoothness == Smoothness::c1;
    }
    bool has_derivative() const noexcept { return static_cast<bool>(derivative); }

    /// Abscissae in (0, pi) where integrands built from this function lose
    /// smoothness (jumps, kinks). Quadrature rules break panels there.
    std::vector<double> breakpoints() const;
};

[[nodiscard]] RealFunction make_function(std::string label, Smoothness smoothness,
                                         std::function<double(double)> evaluator);

/// alpha f + beta g, keeping the weaker smoothness tag and the union of breakpoints.
[[nodiscard]] RealFunction linear_combination(double alpha, const RealFunction& f, double beta,
                                              const RealFunction& g);

// The fixed test battery.
[[nodiscard]] RealFunction constant_function(double value);
[[nodiscard]] RealFunction identity_function();     // theta
[[nodiscard]] RealFunction square_function();       // theta^2
[[nodiscard]] RealFunction sine_function();
[[nodiscard]] RealFunction cosine_function();
[[nodiscard]] RealFunction abs_kink_function();     // |theta - pi/2|, Lipschitz 1
[[nodiscard]] RealFunction sqrt_kink_function();    // sqrt|theta - pi/2|, Holder 1/2
[[nodiscard]] RealFunction step_function();         // indicator of [0, pi/2]
[[nodiscard]] RealFunction spike_function();        // narrow nonnegative hat

/// Spike geometry: hat of height 1 centred here with this half-width.
inline constexpr double spike_center = 1.0;
inline constexpr double spike_half_width = 0.05;

/// Labels in battery order: one, theta, theta2, sin, cos, abs, sqrt_abs, step, spike.
[[nodiscard]] const std::vector<std::string>& battery_labels();
[[nodiscard]] std::vector<RealFunction> test_battery();
[[nodiscard]] std::optional<RealFunction> battery_function(std::string_view label);

}  // namespace gd
