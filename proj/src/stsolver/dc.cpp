#include "uqsim/stsolver/dc.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/parallel.hpp"

#include <string>

namespace uqsim::stsolver {

namespace {

// Continuation xi(s) = xi0 + s (xi1 - xi0) from a converged x at xi0.
NewtonResult homotopy(const models::StochasticDae& model, const Vector& xi0, const Vector& xi1,
                      Vector x, const DcOptions& options) {
    double s = 0.0;
    double ds = 0.25;
    NewtonResult last;
    last.x = x;
    int iterations = 0;
    while (s < 1.0) {
        const double target = std::min(1.0, s + ds);
        const Vector xi = xi0 + target * (xi1 - xi0);
        NewtonResult r;
        try {
            r = solve_operating_point(model, xi, last.x, options.newton, options.t);
        } catch (const NumericError&) {
            r.converged = false;
        }
        iterations += r.iterations;
        if (r.converged) {
            s = target;
            last = r;
            ds = std::min(0.5, ds * 1.5);
        } else {
            ds *= 0.5;
            if (ds < 1e-4) {
                last.converged = false;
                last.iterations = iterations;
                return last;
            }
        }
    }
    last.iterations = iterations;
    return last;
}

}  // namespace

Matrix solve_dc_points(const models::StochasticDae& model, const Matrix& xi,
                       const Vector& nominal_xi, const Vector& start, const DcOptions& options,
                       Vector* residuals, int* iterations) {
    const auto K = xi.rows();
    const auto n = static_cast<Eigen::Index>(model.n);
    Matrix values(K, n);
    Vector res = Vector::Zero(K);
    std::vector<int> iters(static_cast<std::size_t>(K), 0);
    std::vector<char> ok(static_cast<std::size_t>(K), 0);

    parallel_for(static_cast<std::size_t>(K), options.threads, [&](std::size_t j) {
        const auto row = static_cast<Eigen::Index>(j);
        const Vector pt = xi.row(row).transpose();
        NewtonResult r;
        try {
            r = solve_operating_point(model, pt, start, options.newton, options.t);
        } catch (const NumericError&) {
            r.converged = false;
        }
        if (!r.converged) r = homotopy(model, nominal_xi, pt, start, options);
        values.row(row) = r.x.transpose();
        res[row] = r.residual;
        iters[j] = r.iterations;
        ok[j] = r.converged ? 1 : 0;
    });

    Eigen::Index worst = 0;
    bool failed = false;
    for (Eigen::Index j = 0; j < K; ++j) {
        if (!ok[static_cast<std::size_t>(j)]) {
            if (!failed || res[j] > res[worst]) worst = j;
            failed = true;
        }
    }
    if (failed) {
        std::string where;
        for (Eigen::Index c = 0; c < xi.cols(); ++c) {
            where += (c ? "," : "") + std::to_string(xi(worst, c));
        }
        throw NumericError("Newton did not converge at parameter point (" + where +
                           "); residual " + std::to_string(res[worst]));
    }
    if (residuals) *residuals = res;
    if (iterations) {
        *iterations = 0;
        for (int v : iters) *iterations += v;
    }
    return values;
}

DcResult solve_dc(const models::StochasticDae& model, const SpectralSpace& space,
                  const DcOptions& options) {
    model.validate();
    if (space.dimension() != model.d) {
        throw InputError("solve_dc: model has d=" + std::to_string(model.d) +
                         " but the spectral space has " + std::to_string(space.dimension()) +
                         " dimensions");
    }
    const Vector xi0 = model.nominal();
    const Vector guess = options.initial_guess ? *options.initial_guess
                                               : Vector(Vector::Zero(static_cast<Eigen::Index>(model.n)));
    const NewtonResult nominal = solve_operating_point(model, xi0, guess, options.newton, options.t);

    Vector residuals;
    int iterations = 0;
    Matrix values = solve_dc_points(model, space.tps.points, xi0, nominal.x, options, &residuals,
                                    &iterations);
    DcResult out{space.expansion(values), std::move(values), nominal.x,
                 residuals.size() ? residuals.maxCoeff() : 0.0, iterations + nominal.iterations};
    return out;
}

}  // namespace uqsim::stsolver
