#pragma once

#include "uqsim/common/linalg.hpp"
#include "uqsim/models/stochastic_dae.hpp"

#include <functional>

namespace uqsim::stsolver {

struct NewtonOptions {
    /// Converged once ||F||_inf <= residual_tol * n ...
    double residual_tol = 1e-9;
    /// ... and the last update satisfies ||dx||_inf <= step_tol * (1 + ||x||_inf).
    double step_tol = 1e-10;
    int max_iterations = 50;
    /// Halvings of the update while the residual norm does not decrease.
    int max_halvings = 8;
};

struct NewtonResult {
    Vector x;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
};

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Damped Newton. A NumericError thrown by F during a trial step counts as
/// "no decrease"; a singular Jacobian ends the iteration unconverged.
[[nodiscard]] NewtonResult newton_solve(const ResidualFn& F, const JacobianFn& J, Vector x0,
                                        const NewtonOptions& options = {});

/// DC operating point f(x, xi) = B u(t) from x0. Falls back to source
/// stepping (B u scaled from 0 to 1) when plain Newton fails.
/// Throws NumericError when both fail.
[[nodiscard]] NewtonResult solve_operating_point(const models::StochasticDae& model,
                                                 const Vector& xi, const Vector& x0,
                                                 const NewtonOptions& options = {},
                                                 double t = 0.0);

}  // namespace uqsim::stsolver
