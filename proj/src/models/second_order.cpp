#include "uqsim/models/second_order.hpp"

#include "uqsim/common/error.hpp"

#include <Eigen/LU>

#include <cmath>
#include <memory>

namespace uqsim::models {

namespace {

Vector solve_mass(const Matrix& M, const Vector& rhs) {
    Eigen::FullPivLU<Matrix> lu(M);
    lu.setThreshold(1e-13);
    if (M.cwiseAbs().maxCoeff() == 0.0 || !lu.isInvertible() || !M.allFinite()) {
        throw NumericError("mass matrix is singular");
    }
    return lu.solve(rhs);
}

}  // namespace

StochasticDae second_order_to_first(const SecondOrderModel& model) {
    if (model.n == 0) throw InputError("second-order model '" + model.name + "' has no coordinates");
    if (!model.M || !model.D || !model.force) {
        throw InputError("second-order model '" + model.name + "' needs M, D and force");
    }
    const auto n = static_cast<Eigen::Index>(model.n);
    const auto m = static_cast<Eigen::Index>(model.m);

    Vector xi0(static_cast<Eigen::Index>(model.distributions.size()));
    for (std::size_t k = 0; k < model.distributions.size(); ++k) {
        xi0[static_cast<Eigen::Index>(k)] = model.distributions[k].mean();
    }
    const Matrix M0 = model.M(Vector::Zero(n), xi0);
    if (M0.rows() != n || M0.cols() != n) {
        throw InputError("second-order model '" + model.name + "': M must be n x n");
    }
    {
        Eigen::FullPivLU<Matrix> lu(M0);
        lu.setThreshold(1e-13);
        if (M0.cwiseAbs().maxCoeff() == 0.0 || !lu.isInvertible()) {
            throw InputError("second-order model '" + model.name +
                             "': mass matrix is singular at the initial state");
        }
    }
    if (model.conservative && (M0 - M0.transpose()).cwiseAbs().maxCoeff() >
                                  1e-12 * std::max(1.0, M0.cwiseAbs().maxCoeff())) {
        throw InputError("second-order model '" + model.name +
                         "' is flagged conservative but M is not symmetric");
    }

    auto src = std::make_shared<const SecondOrderModel>(model);
    StochasticDae out;
    out.name = model.name;
    out.n = static_cast<std::size_t>(2 * n + m);
    out.d = model.distributions.size();
    out.m = model.m;
    out.distributions = model.distributions;
    out.B = Matrix::Zero(2 * n + m, m);
    out.B.bottomRows(m) = Matrix::Identity(m, m);
    out.input = model.input;
    out.breakpoints = model.breakpoints;

    out.q = [n, m](const Vector& x, const Vector&) {
        Vector q = Vector::Zero(2 * n + m);
        q.head(2 * n) = x.head(2 * n);
        return q;
    };
    out.dq = [n, m](const Vector&, const Vector&) {
        Matrix j = Matrix::Zero(2 * n + m, 2 * n + m);
        j.topLeftCorner(2 * n, 2 * n).setIdentity();
        return j;
    };
    out.f = [src, n, m](const Vector& x, const Vector& xi) {
        const Vector z = x.head(n);
        const Vector v = x.segment(n, n);
        const Vector w = x.tail(m);
        Vector f(2 * n + m);
        f.head(n) = -v;
        f.segment(n, n) = solve_mass(src->M(z, xi), src->D(z, xi) * v + src->force(z, w, xi));
        f.tail(m) = w;
        return f;
    };

    out.unknown_names.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
        const std::string c = static_cast<std::size_t>(i) < model.coordinate_names.size()
                                  ? model.coordinate_names[static_cast<std::size_t>(i)]
                                  : "z" + std::to_string(i);
        out.unknown_names.push_back(c);
    }
    for (Eigen::Index i = 0; i < n; ++i) out.unknown_names.push_back("d(" + out.unknown_names[i] + ")/dt");
    for (Eigen::Index i = 0; i < m; ++i) out.unknown_names.push_back("u" + std::to_string(i));
    return out;
}

}  // namespace uqsim::models
