#pragma once

#include "uqsim/models/stochastic_dae.hpp"
#include "uqsim/stsolver/newton.hpp"
#include "uqsim/stsolver/testing_points.hpp"

#include <optional>

namespace uqsim::stsolver {

struct DcOptions {
    NewtonOptions newton;
    /// Input time for u(t).
    double t = 0.0;
    unsigned threads = 1;
    /// Start for the nominal solve (zeros when absent).
    std::optional<Vector> initial_guess;
};

struct DcResult {
    GpcExpansion expansion;
    Matrix point_values;  ///< K x n solutions at the testing points
    Vector nominal;       ///< deterministic solution at the nominal parameters
    double worst_residual = 0.0;
    int total_iterations = 0;
};

/// Deterministic DC solution at each parameter point (rows of xi), started
/// from `start`. A point that fails directly is reached by continuation in
/// xi from the nominal point. Throws NumericError naming the worst point.
[[nodiscard]] Matrix solve_dc_points(const models::StochasticDae& model, const Matrix& xi,
                                     const Vector& nominal_xi, const Vector& start,
                                     const DcOptions& options, Vector* residuals = nullptr,
                                     int* iterations = nullptr);

/// Stochastic DC: Newton in point space (one n x n solve per testing point),
/// then coefficients from V^-1 [x(xi^1); ...; x(xi^K)].
[[nodiscard]] DcResult solve_dc(const models::StochasticDae& model, const SpectralSpace& space,
                                const DcOptions& options = {});

}  // namespace uqsim::stsolver
