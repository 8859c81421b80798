#pragma once

#include "uqsim/models/stochastic_dae.hpp"

namespace uqsim::models {

/// M(z, xi) z'' + D(z, xi) z' + f(z, u(t), xi) = 0 with z in R^n.
struct SecondOrderModel {
    using MatFn = std::function<Matrix(const Vector& z, const Vector& xi)>;
    using ForceFn = std::function<Vector(const Vector& z, const Vector& u, const Vector& xi)>;

    std::string name;
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<Distribution> distributions;
    MatFn M;
    MatFn D;
    ForceFn force;
    std::function<Vector(double t)> input;
    std::vector<std::string> coordinate_names;
    std::function<std::vector<double>(double t_end)> breakpoints;
    /// When set, conversion checks that M is symmetric at the nominal point.
    bool conservative = false;
};

/// First-order form with state x = (z, v, w), w the inputs held as algebraic
/// unknowns:
///     q = (z, v, 0),  f = (-v, M^-1 (D v + force(z, w, xi)), w),  B = (0; 0; I).
/// Throws InputError when M is singular at z = 0 and the nominal xi. Later
/// singular M (for example after pull-in) raises NumericError during
/// evaluation.
[[nodiscard]] StochasticDae second_order_to_first(const SecondOrderModel& model);

}  // namespace uqsim::models
