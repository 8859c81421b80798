#include "uqsim/stsolver/newton.hpp"

#include "uqsim/common/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <string>

namespace uqsim::stsolver {

namespace {

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double safe_norm(const ResidualFn& F, const Vector& x, Vector& r) {
    try {
        r = F(x);
    } catch (const NumericError&) {
        return std::numeric_limits<double>::infinity();
    }
    const double n = inf_norm(r);
    return std::isfinite(n) ? n : std::numeric_limits<double>::infinity();
}

}  // namespace

NewtonResult newton_solve(const ResidualFn& F, const JacobianFn& J, Vector x0,
                          const NewtonOptions& options) {
    NewtonResult out;
    out.x = std::move(x0);
    const double tol = options.residual_tol * static_cast<double>(std::max<Eigen::Index>(1, out.x.size()));
    Vector r;
    double rn = safe_norm(F, out.x, r);
    out.residual = rn;
    if (!std::isfinite(rn)) return out;

    for (int it = 1; it <= options.max_iterations; ++it) {
        out.iterations = it;
        Matrix jac;
        try {
            jac = J(out.x);
        } catch (const NumericError&) {
            return out;
        }
        Eigen::PartialPivLU<Matrix> lu(jac);
        if (!(lu.rcond() > 1e-15)) return out;
        const Vector dx = lu.solve(-r);
        if (!dx.allFinite()) return out;

        double lambda = 1.0;
        Vector trial_x;
        Vector trial_r;
        double trial_n = std::numeric_limits<double>::infinity();
        for (int h = 0; h <= options.max_halvings; ++h) {
            trial_x = out.x + lambda * dx;
            trial_n = safe_norm(F, trial_x, trial_r);
            if (trial_n < rn || trial_n <= tol) break;
            if (h < options.max_halvings) lambda *= 0.5;
        }
        if (!std::isfinite(trial_n)) return out;
        out.x = std::move(trial_x);
        r = std::move(trial_r);
        rn = trial_n;
        out.residual = rn;
        const double step = lambda * inf_norm(dx);
        if (rn <= tol && step <= options.step_tol * (1.0 + inf_norm(out.x))) {
            out.converged = true;
            return out;
        }
    }
    return out;
}

NewtonResult solve_operating_point(const models::StochasticDae& model, const Vector& xi,
                                   const Vector& x0, const NewtonOptions& options, double t) {
    const Vector bu = model.m > 0 ? Vector(model.B * model.u(t)) : Vector(Vector::Zero(static_cast<Eigen::Index>(model.n)));
    double scale = 1.0;
    ResidualFn F = [&](const Vector& x) { return Vector(model.f(x, xi) - scale * bu); };
    JacobianFn J = [&](const Vector& x) { return model.jacobian_f(x, xi); };

    NewtonResult res = newton_solve(F, J, x0, options);
    if (res.converged) return res;

    // Source stepping: continuation in the input amplitude.
    Vector x = Vector::Zero(static_cast<Eigen::Index>(model.n));
    double done = 0.0;
    double step = 0.1;
    int total = 0;
    while (done < 1.0) {
        const double target = std::min(1.0, done + step);
        scale = target;
        NewtonResult r = newton_solve(F, J, x, options);
        total += r.iterations;
        if (r.converged) {
            x = r.x;
            done = target;
            step = std::min(0.5, step * 1.5);
        } else {
            step *= 0.5;
            if (step < 1e-6) {
                throw NumericError("DC operating point failed (Newton residual " +
                                   std::to_string(res.residual) +
                                   "; source stepping stalled at " + std::to_string(done) + ")");
            }
        }
    }
    scale = 1.0;
    NewtonResult final = newton_solve(F, J, x, options);
    final.iterations += total;
    if (!final.converged) {
        throw NumericError("DC operating point failed after source stepping (residual " +
                           std::to_string(final.residual) + ")");
    }
    return final;
}

}  // namespace uqsim::stsolver
