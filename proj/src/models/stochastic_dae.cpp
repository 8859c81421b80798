#include "uqsim/models/stochastic_dae.hpp"

#include "uqsim/common/error.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace uqsim::models {

Vector StochasticDae::nominal() const {
    Vector out(static_cast<Eigen::Index>(d));
    for (std::size_t k = 0; k < d; ++k) out[static_cast<Eigen::Index>(k)] = distributions[k].mean();
    return out;
}

Vector StochasticDae::u(double t) const {
    if (m == 0) return Vector::Zero(0);
    Vector v = input(t);
    if (static_cast<std::size_t>(v.size()) != m) {
        throw InputError("model '" + name + "': input vector has wrong length");
    }
    return v;
}

std::vector<double> StochasticDae::breakpoints_until(double t_end) const {
    if (!breakpoints) return {};
    std::vector<double> out = breakpoints(t_end);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [t_end](double t) { return t > t_end; });
    return out;
}

Matrix StochasticDae::jacobian_q(const Vector& x, const Vector& xi) const {
    return dq ? dq(x, xi) : finite_difference_jacobian(q, x, xi);
}

Matrix StochasticDae::jacobian_f(const Vector& x, const Vector& xi) const {
    return df ? df(x, xi) : finite_difference_jacobian(f, x, xi);
}

Vector StochasticDae::static_residual(const Vector& x, const Vector& xi, double t) const {
    Vector r = f(x, xi);
    if (m > 0) r -= B * u(t);
    return r;
}

void StochasticDae::validate() const {
    if (n == 0) throw InputError("model '" + name + "' has no unknowns");
    if (distributions.size() != d) {
        throw InputError("model '" + name + "': d does not match the distribution count");
    }
    if (static_cast<std::size_t>(B.rows()) != n || static_cast<std::size_t>(B.cols()) != m) {
        throw InputError("model '" + name + "': B must be n x m");
    }
    if (!q || !f) throw InputError("model '" + name + "': q and f are required");
    if (m > 0 && !input) throw InputError("model '" + name + "': input function missing");
    if (!unknown_names.empty() && unknown_names.size() != n) {
        throw InputError("model '" + name + "': unknown name count differs from n");
    }
    if (!parameter_names.empty() && parameter_names.size() != d) {
        throw InputError("model '" + name + "': parameter name count differs from d");
    }
}

std::size_t StochasticDae::unknown_index(const std::string& unknown) const {
    auto it = std::find(unknown_names.begin(), unknown_names.end(), unknown);
    if (it == unknown_names.end()) {
        throw InputError("model '" + name + "' has no unknown named '" + unknown + "'");
    }
    return static_cast<std::size_t>(it - unknown_names.begin());
}

Matrix finite_difference_jacobian(const StochasticDae::VecFn& fn, const Vector& x,
                                  const Vector& xi) {
    const Eigen::Index n = x.size();
    Matrix jac;
    Vector probe = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double h = std::max(1e-7, 1e-7 * std::abs(x[i]));
        probe[i] = x[i] + h;
        const Vector plus = fn(probe, xi);
        probe[i] = x[i] - h;
        const Vector minus = fn(probe, xi);
        probe[i] = x[i];
        if (i == 0) jac.resize(plus.size(), n);
        jac.col(i) = (plus - minus) / (2.0 * h);
    }
    return jac;
}

StochasticDae restrict_parameters(const StochasticDae& model, const std::vector<std::size_t>& keep,
                                  const Vector& anchor) {
    if (static_cast<std::size_t>(anchor.size()) != model.d) {
        throw InputError("restrict_parameters: anchor has wrong dimension");
    }
    for (std::size_t k : keep) {
        if (k >= model.d) throw InputError("restrict_parameters: parameter index out of range");
    }
    StochasticDae out = model;
    out.d = keep.size();
    out.distributions.clear();
    out.parameter_names.clear();
    for (std::size_t k : keep) {
        out.distributions.push_back(model.distributions[k]);
        if (k < model.parameter_names.size()) out.parameter_names.push_back(model.parameter_names[k]);
    }
    if (out.parameter_names.size() != keep.size()) out.parameter_names.clear();

    auto keep_ptr = std::make_shared<const std::vector<std::size_t>>(keep);
    auto anchor_ptr = std::make_shared<const Vector>(anchor);
    auto lift = [keep_ptr, anchor_ptr](const Vector& sub) {
        Vector full = *anchor_ptr;
        for (std::size_t j = 0; j < keep_ptr->size(); ++j) {
            full[static_cast<Eigen::Index>((*keep_ptr)[j])] = sub[static_cast<Eigen::Index>(j)];
        }
        return full;
    };
    auto wrap_vec = [lift](const StochasticDae::VecFn& fn) -> StochasticDae::VecFn {
        if (!fn) return {};
        return [fn, lift](const Vector& x, const Vector& xi) { return fn(x, lift(xi)); };
    };
    auto wrap_mat = [lift](const StochasticDae::MatFn& fn) -> StochasticDae::MatFn {
        if (!fn) return {};
        return [fn, lift](const Vector& x, const Vector& xi) { return fn(x, lift(xi)); };
    };
    out.q = wrap_vec(model.q);
    out.f = wrap_vec(model.f);
    out.dq = wrap_mat(model.dq);
    out.df = wrap_mat(model.df);
    return out;
}

}  // namespace uqsim::models
