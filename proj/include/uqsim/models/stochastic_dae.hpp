#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/polychaos/distribution.hpp"

#include <functional>
#include <string>
#include <vector>

namespace uqsim::models {

using polychaos::Distribution;

/// d/dt q(x, xi) + f(x, xi) = B u(t), x in R^n, xi in R^d, u in R^m.
///
/// q and f must be pure: identical arguments give bit-identical results, and
/// concurrent calls are allowed. Jacobians are optional; when absent, central
/// differences are used.
struct StochasticDae {
    using VecFn = std::function<Vector(const Vector& x, const Vector& xi)>;
    using MatFn = std::function<Matrix(const Vector& x, const Vector& xi)>;

    std::string name;
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    std::vector<Distribution> distributions;
    Matrix B;
    std::function<Vector(double t)> input;
    VecFn q;
    VecFn f;
    MatFn dq;
    MatFn df;
    std::vector<std::string> unknown_names;
    /// Optional labels for the d parameters (reports only).
    std::vector<std::string> parameter_names;
    /// Times up to t_end where u(t) is not smooth; the integrator lands on
    /// them and restarts. May be empty.
    std::function<std::vector<double>(double t_end)> breakpoints;

    [[nodiscard]] std::vector<double> breakpoints_until(double t_end) const;

    /// Means of the marginals; the deterministic "nominal" parameter point.
    [[nodiscard]] Vector nominal() const;
    [[nodiscard]] Vector u(double t) const;
    [[nodiscard]] Matrix jacobian_q(const Vector& x, const Vector& xi) const;
    [[nodiscard]] Matrix jacobian_f(const Vector& x, const Vector& xi) const;
    /// f(x, xi) - B u(t): the DC residual.
    [[nodiscard]] Vector static_residual(const Vector& x, const Vector& xi, double t) const;

    /// Throws InputError on inconsistent dimensions.
    void validate() const;

    /// Index of a named unknown; throws InputError when absent.
    [[nodiscard]] std::size_t unknown_index(const std::string& unknown) const;
};

/// Central differences with step max(1e-7, 1e-7 |x_i|).
[[nodiscard]] Matrix finite_difference_jacobian(const StochasticDae::VecFn& fn, const Vector& x,
                                                const Vector& xi);

/// Same model with the parameters outside `keep` frozen at `anchor` values.
/// The result has d = keep.size() and the kept marginals in the given order.
[[nodiscard]] StochasticDae restrict_parameters(const StochasticDae& model,
                                                const std::vector<std::size_t>& keep,
                                                const Vector& anchor);

}  // namespace uqsim::models
