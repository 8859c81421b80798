#include "uqsim/polychaos/ortho_basis.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/polychaos/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uqsim::polychaos {

OrthoBasis::OrthoBasis(std::vector<double> jacobi_gamma, std::vector<double> kappa,
                       std::string family, std::optional<Distribution> distribution)
    : gamma_(std::move(jacobi_gamma)),
      kappa_(std::move(kappa)),
      family_(std::move(family)),
      distribution_(std::move(distribution)) {
    if (kappa_.empty() || gamma_.size() != kappa_.size()) {
        throw InputError("orthogonal basis needs p+1 gamma and p+1 kappa coefficients");
    }
    if (kappa_[0] != 1.0) throw InputError("orthogonal basis requires kappa_0 = 1");
    for (std::size_t j = 1; j < kappa_.size(); ++j) {
        if (!(kappa_[j] > 0.0)) {
            throw NumericError("kappa_" + std::to_string(j) + " is not positive");
        }
    }
}

std::vector<double> OrthoBasis::norms() const {
    std::vector<double> out(kappa_.size());
    double prod = 1.0;
    for (std::size_t j = 0; j < kappa_.size(); ++j) {
        prod *= kappa_[j];
        out[j] = std::sqrt(prod);
    }
    return out;
}

void OrthoBasis::eval_all(double x, std::span<double> out) const {
    const int p = order();
    out[0] = 1.0;
    if (p == 0) return;
    out[1] = (x - gamma_[0]) / std::sqrt(kappa_[1]);
    for (int j = 1; j < p; ++j) {
        out[j + 1] = ((x - gamma_[j]) * out[j] - std::sqrt(kappa_[j]) * out[j - 1]) /
                     std::sqrt(kappa_[j + 1]);
    }
}

double OrthoBasis::eval(int degree, double x) const {
    if (degree < 0 || degree > order()) throw InputError("basis degree out of range");
    double prev = 0.0;
    double cur = 1.0;
    for (int j = 0; j < degree; ++j) {
        const double next =
            ((x - gamma_[j]) * cur - (j > 0 ? std::sqrt(kappa_[j]) * prev : 0.0)) /
            std::sqrt(kappa_[j + 1]);
        prev = cur;
        cur = next;
    }
    return cur;
}

double OrthoBasis::eval_monic(int degree, double x) const {
    if (degree < 0 || degree > order()) throw InputError("basis degree out of range");
    double prev = 0.0;
    double cur = 1.0;
    for (int j = 0; j < degree; ++j) {
        const double next = (x - gamma_[j]) * cur - kappa_[j] * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// Monic Jacobi recurrence on [-1, 1] for weight (1-t)^alpha (1+t)^beta.
void jacobi_coefficients(double alpha, double beta, int order, std::vector<double>& gamma,
                         std::vector<double>& kappa) {
    const double ab = alpha + beta;
    gamma.assign(order + 1, 0.0);
    kappa.assign(order + 1, 1.0);
    gamma[0] = (beta - alpha) / (ab + 2.0);
    for (int j = 1; j <= order; ++j) {
        const double s = 2.0 * j + ab;
        gamma[j] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    if (order >= 1) {
        kappa[1] = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    }
    for (int j = 2; j <= order; ++j) {
        const double s = 2.0 * j + ab;
        kappa[j] = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
                   (s * s * (s + 1.0) * (s - 1.0));
    }
}

}  // namespace

OrthoBasis make_standard_basis(const Distribution& dist, int order) {
    if (order < 0) throw InputError("basis order must be >= 0");
    std::vector<double> gamma(order + 1, 0.0);
    std::vector<double> kappa(order + 1, 1.0);
    const auto& par = dist.params();
    switch (dist.family()) {
        case Family::Gaussian: {
            const double var = par[1] * par[1];
            for (int j = 0; j <= order; ++j) gamma[j] = par[0];
            for (int j = 1; j <= order; ++j) kappa[j] = j * var;
            return OrthoBasis(std::move(gamma), std::move(kappa), "hermite", dist);
        }
        case Family::Uniform: {
            const double center = 0.5 * (par[0] + par[1]);
            const double half = 0.5 * (par[1] - par[0]);
            for (int j = 0; j <= order; ++j) gamma[j] = center;
            for (int j = 1; j <= order; ++j) {
                const double jj = static_cast<double>(j) * j;
                kappa[j] = half * half * jj / (4.0 * jj - 1.0);
            }
            return OrthoBasis(std::move(gamma), std::move(kappa), "legendre", dist);
        }
        case Family::Gamma: {
            const double shape = par[0];
            for (int j = 0; j <= order; ++j) gamma[j] = 2.0 * j + shape;
            for (int j = 1; j <= order; ++j) kappa[j] = j * (j + shape - 1.0);
            return OrthoBasis(std::move(gamma), std::move(kappa), "laguerre", dist);
        }
        case Family::Beta: {
            // x = (t + 1) / 2 maps the Jacobi interval onto [0, 1];
            // (1-x)^(b-1) x^(a-1) corresponds to alpha = b-1, beta = a-1.
            jacobi_coefficients(par[1] - 1.0, par[0] - 1.0, order, gamma, kappa);
            for (int j = 0; j <= order; ++j) gamma[j] = 0.5 * (gamma[j] + 1.0);
            for (int j = 1; j <= order; ++j) kappa[j] *= 0.25;
            return OrthoBasis(std::move(gamma), std::move(kappa), "jacobi", dist);
        }
        case Family::Custom:
            break;
    }
    throw InputError("no closed-form basis for custom distribution '" + dist.label() +
                     "'; use stieltjes_basis");
}

OrthoBasis stieltjes_basis(const QuadratureRule& measure, int order, std::string family,
                           double kappa_floor) {
    if (order < 0) throw InputError("basis order must be >= 0");
    if (measure.dimension() != 1) throw InputError("Stieltjes measure must be univariate");
    const Eigen::Index n = measure.weights.size();
    if (n == 0) throw InputError("Stieltjes measure is empty");

    const double mass = measure.weights.sum();
    if (!(mass > 0.0)) throw NumericError("Stieltjes measure has no mass");
    const Vector w = measure.weights / mass;
    const Vector x = measure.points.col(0);

    std::vector<double> gamma(order + 1, 0.0);
    std::vector<double> kappa(order + 1, 1.0);

    // Orthonormal recurrence: p_j = pi_j / ||pi_j||, so that
    //   gamma_j = <x pi_j, pi_j> / <pi_j, pi_j>           = sum w x p_j^2
    //   kappa_{j+1} = <pi_{j+1}, pi_{j+1}> / <pi_j, pi_j> = sum w r^2,
    // with r = (x - gamma_j) p_j - sqrt(kappa_j) p_{j-1} = pi_{j+1} / ||pi_j||.
    Vector prev = Vector::Zero(n);
    Vector cur = Vector::Ones(n);
    for (int j = 0; j <= order; ++j) {
        gamma[j] = (w.array() * x.array() * cur.array().square()).sum();
        if (j == order) break;
        Vector r = (x.array() - gamma[j]) * cur.array();
        if (j > 0) r -= std::sqrt(kappa[j]) * prev;
        const double next = (w.array() * r.array().square()).sum();
        const double floor = (j == 0) ? kappa_floor * std::max(1.0, gamma[0] * gamma[0])
                                      : 1e-12 * kappa[1];
        if (!(next > floor) || !std::isfinite(next)) {
            throw NumericError("degenerate measure: kappa_" + std::to_string(j + 1) + " = " +
                               std::to_string(next) + " at degree j=" + std::to_string(j + 1) +
                               " (measure supports only " + std::to_string(j + 1) +
                               " orthogonal polynomials)");
        }
        kappa[j + 1] = next;
        prev = std::move(cur);
        cur = r / std::sqrt(next);
    }
    return OrthoBasis(std::move(gamma), std::move(kappa), std::move(family));
}

OrthoBasis stieltjes_basis(const Distribution& dist, int order, const StieltjesOptions& options) {
    if (order < 0) throw InputError("basis order must be >= 0");
    double lo = dist.lower();
    double hi = dist.upper();
    const double sd = dist.stddev();
    // An unbounded side is pushed out until density * |x - mean|^(2 order + 3)
    // at the edge is negligible against sd^(2 order + 2).
    auto edge = [&](double sign) {
        double reach = options.truncation_sigmas;
        for (int i = 0; i < 40; ++i) {
            const double x = dist.mean() + sign * reach * sd;
            const double tail = dist.density(x) * sd * std::pow(reach, 2 * order + 3);
            if (!(tail > 1e-16)) break;
            reach *= 1.25;
        }
        return dist.mean() + sign * reach * sd;
    };
    if (!std::isfinite(lo)) lo = edge(-1.0);
    if (!std::isfinite(hi)) hi = edge(1.0);
    if (!(hi > lo)) throw NumericError("Stieltjes integration interval is empty");

    const int gl_points = std::max(10, order + 2);
    const auto& gl = detail::gauss_legendre(gl_points);

    auto build = [&](int panels) {
        QuadratureRule rule;
        rule.points.resize(static_cast<Eigen::Index>(panels) * gl_points, 1);
        rule.weights.resize(static_cast<Eigen::Index>(panels) * gl_points);
        const double width = (hi - lo) / panels;
        Eigen::Index k = 0;
        for (int i = 0; i < panels; ++i) {
            const double a = lo + i * width;
            for (int g = 0; g < gl_points; ++g, ++k) {
                const double xg = a + 0.5 * width * (gl.first[g] + 1.0);
                rule.points(k, 0) = xg;
                rule.weights[k] = 0.5 * width * gl.second[g] * dist.density(xg);
            }
        }
        return stieltjes_basis(rule, order, "stieltjes", options.kappa_floor);
    };

    int panels = options.initial_panels;
    OrthoBasis current = build(panels);
    for (int refine = 0; refine < options.max_refinements; ++refine) {
        panels *= 2;
        OrthoBasis next = build(panels);
        double change = 0.0;
        for (int j = 0; j <= order; ++j) {
            const double gj = next.jacobi_gamma()[j];
            const double kj = next.kappa()[j];
            change = std::max(change, std::abs(gj - current.jacobi_gamma()[j]) /
                                          std::max(1.0, std::abs(gj)));
            change = std::max(change,
                              std::abs(kj - current.kappa()[j]) / std::max(1.0, std::abs(kj)));
        }
        current = std::move(next);
        if (change < options.tolerance) {
            std::vector<double> g(current.jacobi_gamma().begin(), current.jacobi_gamma().end());
            std::vector<double> kp(current.kappa().begin(), current.kappa().end());
            return OrthoBasis(std::move(g), std::move(kp), "stieltjes", dist);
        }
    }
    throw NumericError("Stieltjes coefficients for '" + dist.label() +
                       "' did not settle to tolerance after panel refinement");
}

OrthoBasis reorder_basis(const OrthoBasis& basis, int order) {
    const auto& dist = basis.distribution();
    if (!dist) {
        if (order <= basis.order()) {
            std::vector<double> g(basis.jacobi_gamma().begin(),
                                  basis.jacobi_gamma().begin() + order + 1);
            std::vector<double> k(basis.kappa().begin(), basis.kappa().begin() + order + 1);
            return OrthoBasis(std::move(g), std::move(k), basis.family());
        }
        throw InputError("cannot raise the order of a basis without a known distribution");
    }
    if (dist->is_named()) return make_standard_basis(*dist, order);
    return stieltjes_basis(*dist, order);
}

OrthoBasis scale_basis(const OrthoBasis& basis, double scale) {
    if (!(scale > 0.0)) throw InputError("basis scale must be positive");
    std::vector<double> g(basis.jacobi_gamma().begin(), basis.jacobi_gamma().end());
    std::vector<double> k(basis.kappa().begin(), basis.kappa().end());
    for (double& v : g) v *= scale;
    for (std::size_t j = 1; j < k.size(); ++j) k[j] *= scale * scale;
    return OrthoBasis(std::move(g), std::move(k), basis.family());
}

}  // namespace uqsim::polychaos
