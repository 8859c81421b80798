#pragma once

#include "uqsim/models/stochastic_dae.hpp"
#include "uqsim/stsolver/dc.hpp"
#include "uqsim/stsolver/newton.hpp"
#include "uqsim/stsolver/testing_points.hpp"

#include <optional>
#include <vector>

namespace uqsim::stsolver {

struct TransientOptions {
    double t0 = 0.0;
    double t1 = 1.0;
    /// Accept a step when max_i LTE_i / (1 + |x_i|) <= tol * h / (t1 - t0),
    /// i.e. tol bounds the error accumulated over the whole span.
    double tol = 1e-6;
    /// First step after the start and after each breakpoint; 0 picks 1e-6 of the span.
    double initial_step = 0.0;
    /// 0 picks (t1 - t0) / 20.
    double max_step = 0.0;
    /// 0 picks 1e-14 of the span.
    double min_step = 0.0;
    /// Consecutive accepted steps before the step size doubles.
    int grow_after = 5;
    /// Fixed-step mode: no error control, step = fixed_step throughout.
    double fixed_step = 0.0;
    /// Times the step sequence must land on; when non-empty, only these
    /// (plus t0) are recorded.
    std::vector<double> output_times;
    NewtonOptions newton;
    unsigned threads = 1;
};

struct StepRecord {
    double t = 0.0;  ///< time at the start of the step
    double h = 0.0;
    double error = 0.0;  ///< normalized LTE estimate (0 when not estimated)
    bool accepted = false;
    bool backward_euler = false;
};

/// Per-point trajectories on one shared time grid.
struct PointTrajectory {
    std::vector<double> times;
    std::vector<Matrix> states;  ///< K x n per recorded time
    std::vector<StepRecord> steps;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

struct StSolution {
    std::vector<double> times;
    std::vector<GpcExpansion> expansions;
    std::vector<StepRecord> steps;
    std::size_t accepted = 0;
    std::size_t rejected = 0;

    /// Expansion recorded at exactly time t (throws InputError otherwise).
    [[nodiscard]] const GpcExpansion& at(double t) const;
};

/// Backward Euler for the first three steps after every restart (the first
/// two unchecked, at the initial step size), trapezoidal rule afterwards, one
/// step sequence for all K points. LTE estimates come from divided
/// differences of the states accepted since the restart: h^2/2 |x''| for
/// backward Euler and h^3/12 |x'''| for the trapezoidal rule. Rejection
/// halves h. The state at a breakpoint never enters a divided difference,
/// since algebraic unknowns may jump there.
/// Throws NumericError on step underflow, naming the time.
[[nodiscard]] PointTrajectory integrate_points(const models::StochasticDae& model,
                                               const Matrix& xi, const Matrix& x0,
                                               const TransientOptions& options);

/// Stochastic transient. x0 defaults to the stochastic DC solution at t0.
[[nodiscard]] StSolution integrate_transient(const models::StochasticDae& model,
                                             const SpectralSpace& space,
                                             const TransientOptions& options,
                                             const std::optional<GpcExpansion>& x0 = std::nullopt);

}  // namespace uqsim::stsolver
