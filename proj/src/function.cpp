#include "gd/function.hpp"

#include <algorithm>
#include <cmath>

#include "gd/kernel.hpp"

namespace gd {

std::string_view to_string(Smoothness s) {
    switch (s) {
        case Smoothness::continuous: return "continuous";
        case Smoothness::lipschitz: return "lipschitz";
        case Smoothness::c1: return "c1";
        case Smoothness::step: return "step";
        case Smoothness::generic_lp: return "generic_lp";
    }
    return "unknown";
}

std::vector<double> RealFunction::breakpoints() const {
    std::vector<double> out = discontinuities;
    out.insert(out.end(), kinks.begin(), kinks.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RealFunction make_function(std::string label, Smoothness smoothness, std::function<double(double)> evaluator) {
    RealFunction f;
    f.label = std::move(label);
    f.smoothness = smoothness;
    f.evaluator = std::move(evaluator);
    return f;
}

namespace {

// Ordering from strongest to weakest regularity.
int rank(Smoothness s) {
    switch (s) {
        case Smoothness::c1: return 0;
        case Smoothness::lipschitz: return 1;
        case Smoothness::continuous: return 2;
        case Smoothness::step: return 3;
        case Smoothness::generic_lp: return 4;
    }
    return 4;
}

}  // namespace

RealFunction linear_combination(double alpha, const RealFunction& f, double beta, const RealFunction& g) {
    RealFunction h;
    h.label = f.label + "+" + g.label;
    h.smoothness = rank(f.smoothness) >= rank(g.smoothness) ? f.smoothness : g.smoothness;
    h.evaluator = [alpha, beta, fe = f.evaluator, ge = g.evaluator](double t) { return alpha * fe(t) + beta * ge(t); };
    if (h.smoothness == Smoothness::lipschitz) {
        const auto lip = [](const RealFunction& u) {
            return u.smoothness == Smoothness::lipschitz ? u.lipschitz_constant : 0.0;
        };
        h.lipschitz_constant = std::abs(alpha) * lip(f) + std::abs(beta) * lip(g);
    }
    h.discontinuities = f.discontinuities;
    h.discontinuities.insert(h.discontinuities.end(), g.discontinuities.begin(), g.discontinuities.end());
    std::sort(h.discontinuities.begin(), h.discontinuities.end());
    h.discontinuities.erase(std::unique(h.discontinuities.begin(), h.discontinuities.end()), h.discontinuities.end());
    h.kinks = f.kinks;
    h.kinks.insert(h.kinks.end(), g.kinks.begin(), g.kinks.end());
    std::sort(h.kinks.begin(), h.kinks.end());
    h.kinks.erase(std::unique(h.kinks.begin(), h.kinks.end()), h.kinks.end());
    if (f.derivative && g.derivative)
        h.derivative = [alpha, beta, fd = f.derivative, gd = g.derivative](double t) {
            return alpha * fd(t) + beta * gd(t);
        };
    return h;
}

RealFunction constant_function(double value) {
    auto f = make_function(value == 1.0 ? "one" : "const", Smoothness::c1, [value](double) { return value; });
    f.derivative = [](double) { return 0.0; };
    return f;
}

RealFunction identity_function() {
    auto f = make_function("theta", Smoothness::c1, [](double t) { return t; });
    f.derivative = [](double) { return 1.0; };
    return f;
}

RealFunction square_function() {
    auto f = make_function("theta2", Smoothness::c1, [](double t) { return t * t; });
    f.derivative = [](double t) { return 2.0 * t; };
    return f;
}

RealFunction sine_function() {
    auto f = make_function("sin", Smoothness::c1, [](double t) { return std::sin(t); });
    f.derivative = [](double t) { return std::cos(t); };
    return f;
}

RealFunction cosine_function() {
    auto f = make_function("cos", Smoothness::c1, [](double t) { return std::cos(t); });
    f.derivative = [](double t) { return -std::sin(t); };
    return f;
}

RealFunction abs_kink_function() {
    auto f = make_function("abs", Smoothness::lipschitz, [](double t) { return std::abs(t - pi / 2); });
    f.lipschitz_constant = 1.0;
    f.kinks = {pi / 2};
    return f;
}

RealFunction sqrt_kink_function() {
    auto f = make_function("sqrt_abs", Smoothness::continuous, [](double t) { return std::sqrt(std::abs(t - pi / 2)); });
    f.kinks = {pi / 2};
    return f;
}

RealFunction step_function() {
    auto f = make_function("step", Smoothness::step, [](double t) { return t <= pi / 2 ? 1.0 : 0.0; });
    f.discontinuities = {pi / 2};
    return f;
}

RealFunction spike_function() {
    auto f = make_function("spike", Smoothness::lipschitz, [](double t) {
        return std::max(0.0, 1.0 - std::abs(t - spike_center) / spike_half_width);
    });
    f.lipschitz_constant = 1.0 / spike_half_width;
    f.kinks = {spike_center - spike_half_width, spike_center, spike_center + spike_half_width};
    return f;
}

const std::vector<std::string>& battery_labels() {
    static const std::vector<std::string> labels{"one", "theta", "theta2", "sin", "cos",
                                                 "abs", "sqrt_abs", "step", "spike"};
    return labels;
}

std::vector<RealFunction> test_battery() {
    std::vector<RealFunction> out;
    for (const auto& label : battery_labels()) out.push_back(*battery_function(label));
    return out;
}

std::optional<RealFunction> battery_function(std::string_view label) {
    if (label == "one") return constant_function(1.0);
    if (label == "theta") return identity_function();
    if (label == "theta2") return square_function();
    if (label == "sin") return sine_function();
    if (label == "cos") return cosine_function();
    if (label == "abs") return abs_kink_function();
    if (label == "sqrt_abs") return sqrt_kink_function();
    if (label == "step") return step_function();
    if (label == "spike") return spike_function();
    return std::nullopt;
}

}  // namespace gd
