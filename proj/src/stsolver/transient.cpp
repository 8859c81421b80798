#include "uqsim/stsolver/transient.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace uqsim::stsolver {

namespace {

struct Accepted {
    double t;
    Matrix x;  // K x n
};

std::string time_text(double t) {
    std::ostringstream out;
    out.precision(12);
    out << t;
    return out.str();
}

// Max over points and components of |DD| / (1 + |x_new|) scaled by `factor`,
// where DD is the divided difference of the given order over `pts`.
double lte_estimate(const std::vector<const Accepted*>& pts, double factor) {
    // Newton divided-difference table on matrices.
    std::vector<Matrix> dd;
    for (const auto* p : pts) dd.push_back(p->x);
    const std::size_t k = pts.size();
    for (std::size_t level = 1; level < k; ++level) {
        for (std::size_t i = k - 1; i >= level; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (pts[i]->t - pts[i - level]->t);
            if (i == level) break;
        }
    }
    const Matrix& top = dd[k - 1];
    const Matrix& xnew = pts.back()->x;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < top.rows(); ++j) {
        for (Eigen::Index i = 0; i < top.cols(); ++i) {
            worst = std::max(worst, factor * std::abs(top(j, i)) / (1.0 + std::abs(xnew(j, i))));
        }
    }
    return worst;
}

}  // namespace

const GpcExpansion& StSolution::at(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] == t) return expansions[i];
    }
    throw InputError("no solution recorded at t=" + time_text(t));
}

PointTrajectory integrate_points(const models::StochasticDae& model, const Matrix& xi,
                                 const Matrix& x0, const TransientOptions& options) {
    model.validate();
    const double span = options.t1 - options.t0;
    if (!(span > 0.0)) throw InputError("transient: t1 must exceed t0");
    if (options.fixed_step < 0.0 || !(options.tol > 0.0)) {
        throw InputError("transient: tolerance and fixed step must be positive");
    }
    const auto K = xi.rows();
    const auto n = static_cast<Eigen::Index>(model.n);
    if (x0.rows() != K || x0.cols() != n) throw InputError("transient: x0 must be K x n");

    const bool fixed = options.fixed_step > 0.0;
    const double h_init = fixed ? options.fixed_step
                                : (options.initial_step > 0.0 ? options.initial_step : 1e-6 * span);
    const double h_max = options.max_step > 0.0 ? options.max_step : span / 20.0;
    const double h_min = options.min_step > 0.0 ? options.min_step : 1e-14 * span;

    std::vector<double> breaks;
    for (double b : model.breakpoints_until(options.t1)) {
        if (b > options.t0 && b < options.t1) breaks.push_back(b);
    }
    std::vector<double> outputs;
    for (double t : options.output_times) {
        if (t < options.t0 || t > options.t1) {
            throw InputError("output time " + time_text(t) + " outside the simulated span");
        }
        if (t > options.t0) outputs.push_back(t);
    }
    std::vector<double> stops = breaks;
    stops.insert(stops.end(), outputs.begin(), outputs.end());
    stops.push_back(options.t1);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    auto is_break = [&](double t) { return std::binary_search(breaks.begin(), breaks.end(), t); };
    auto is_output = [&](double t) {
        return outputs.empty() || std::binary_search(outputs.begin(), outputs.end(), t);
    };

    PointTrajectory out;
    out.times.push_back(options.t0);
    out.states.push_back(x0);

    Matrix x = x0;
    Matrix qdot(K, n);  // dq/dt at the current state, needed by the trapezoidal rule
    auto update_qdot = [&](double t) {
        const Vector bu = model.m > 0 ? Vector(model.B * model.u(t)) : Vector(Vector::Zero(n));
        for (Eigen::Index j = 0; j < K; ++j) {
            qdot.row(j) = (bu - model.f(x.row(j).transpose(), xi.row(j).transpose())).transpose();
        }
    };

    std::deque<Accepted> history;  // accepted states after the last restart
    double t = options.t0;
    double h = h_init;
    int streak = 0;
    std::size_t stop_idx = 0;

    Matrix x_new(K, n);
    std::vector<char> ok(static_cast<std::size_t>(K));
    while (t < options.t1) {
        while (stop_idx < stops.size() && stops[stop_idx] <= t) ++stop_idx;
        const double stop = stops[stop_idx];
        double step = fixed ? h : std::min(h, h_max);
        bool land = false;
        if (t + 1.01 * step >= stop) {
            step = stop - t;
            land = true;
        }
        if (step < h_min) {
            throw NumericError("time step underflow (h=" + time_text(step) + ") at t=" +
                               time_text(t));
        }
        const double t_new = land ? stop : t + step;
        // After a restart: two unchecked BE steps, one checked BE step, then TR.
        const bool use_be = history.size() < 3;
        const Vector bu_new =
            model.m > 0 ? Vector(model.B * model.u(t_new)) : Vector(Vector::Zero(n));
        if (!use_be) update_qdot(t);

        parallel_for(static_cast<std::size_t>(K), options.threads, [&](std::size_t jj) {
            const auto j = static_cast<Eigen::Index>(jj);
            const Vector pt = xi.row(j).transpose();
            const Vector xn = x.row(j).transpose();
            const Vector qn = model.q(xn, pt);
            const double a = use_be ? 1.0 / step : 2.0 / step;
            const Vector qd = use_be ? Vector(Vector::Zero(n)) : Vector(qdot.row(j).transpose());
            ResidualFn F = [&](const Vector& v) {
                Vector r = a * (model.q(v, pt) - qn) + model.f(v, pt) - bu_new;
                if (!use_be) r -= qd;
                return r;
            };
            JacobianFn J = [&](const Vector& v) {
                return Matrix(a * model.jacobian_q(v, pt) + model.jacobian_f(v, pt));
            };
            NewtonResult res = newton_solve(F, J, xn, options.newton);
            ok[jj] = res.converged ? 1 : 0;
            x_new.row(j) = res.x.transpose();
        });
        const bool converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });

        StepRecord rec;
        rec.t = t;
        rec.h = step;
        rec.backward_euler = use_be;
        bool accept = converged;
        if (converged && !fixed && history.size() >= 2) {
            Accepted candidate{t_new, x_new};
            std::vector<const Accepted*> pts;
            const std::size_t need = use_be ? 2 : 3;
            for (std::size_t i = history.size() - need; i < history.size(); ++i) pts.push_back(&history[i]);
            pts.push_back(&candidate);
            // BE: h^2/2 * 2 DD2 ; TR: h^3/12 * 6 DD3.
            const double factor = use_be ? step * step : 0.5 * step * step * step;
            rec.error = lte_estimate(pts, factor);
            accept = rec.error <= options.tol * step / span;
        }
        if (!converged && fixed) {
            throw NumericError("Newton failed in fixed-step transient at t=" + time_text(t_new));
        }
        rec.accepted = accept;
        out.steps.push_back(rec);
        if (!accept) {
            ++out.rejected;
            streak = 0;
            h = step * 0.5;
            continue;
        }

        ++out.accepted;
        x = x_new;
        t = t_new;
        if (is_output(t)) {
            out.times.push_back(t);
            out.states.push_back(x);
        }
        if (is_break(t)) {
            history.clear();
            h = h_init;
            streak = 0;
            continue;
        }
        history.push_back({t, x});
        while (history.size() > 4) history.pop_front();
        if (!fixed) {
            // A landing step may be shorter than h; keep the nominal size.
            if (!land) h = step;
            if (++streak >= options.grow_after) {
                h *= 2.0;
                streak = 0;
            }
            h = std::min(h, h_max);
        }
    }
    return out;
}

StSolution integrate_transient(const models::StochasticDae& model, const SpectralSpace& space,
                               const TransientOptions& options,
                               const std::optional<GpcExpansion>& x0) {
    if (space.dimension() != model.d) {
        throw InputError("transient: model dimension differs from the spectral space");
    }
    Matrix start;
    if (x0) {
        if (x0->terms() != space.size() || x0->outputs() != model.n) {
            throw InputError("transient: initial expansion has the wrong shape");
        }
        start = space.tps.V * x0->coefficients();
    } else {
        DcOptions dc;
        dc.newton = options.newton;
        dc.t = options.t0;
        dc.threads = options.threads;
        start = solve_dc(model, space, dc).point_values;
    }
    PointTrajectory traj = integrate_points(model, space.tps.points, start, options);
    StSolution out;
    out.times = std::move(traj.times);
    for (const Matrix& s : traj.states) out.expansions.push_back(space.expansion(s));
    out.steps = std::move(traj.steps);
    out.accepted = traj.accepted;
    out.rejected = traj.rejected;
    return out;
}

}  // namespace uqsim::stsolver
