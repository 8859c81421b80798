#pragma once

#include "uqsim/polychaos/distribution.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace uqsim::polychaos {

struct QuadratureRule;

/// Univariate family of polynomials orthonormal against one marginal.
///
/// The monic polynomials obey
///     pi_{j+1}(x) = (x - gamma_j) pi_j(x) - kappa_j pi_{j-1}(x),  pi_0 = 1,
/// and phi_j = pi_j / sqrt(kappa_0 ... kappa_j) with kappa_0 = 1.
///
/// A basis of order p stores gamma_0..gamma_p and kappa_0..kappa_p. Only
/// gamma_0..gamma_{p-1} enter the recurrence for phi_0..phi_p; gamma_p is kept
/// so that the (p+1)-point Jacobi matrix can be formed for Gauss quadrature.
class OrthoBasis {
public:
    OrthoBasis(std::vector<double> jacobi_gamma, std::vector<double> kappa, std::string family,
               std::optional<Distribution> distribution = std::nullopt);

    [[nodiscard]] int order() const noexcept { return static_cast<int>(kappa_.size()) - 1; }

    /// gamma_0 .. gamma_{p-1}.
    [[nodiscard]] std::span<const double> gamma() const noexcept {
        return {gamma_.data(), gamma_.size() - 1};
    }
    /// gamma_0 .. gamma_p (diagonal of the full Jacobi matrix).
    [[nodiscard]] std::span<const double> jacobi_gamma() const noexcept { return gamma_; }
    [[nodiscard]] std::span<const double> kappa() const noexcept { return kappa_; }
    /// sqrt(kappa_0 ... kappa_j) for j = 0..p: the norm of pi_j.
    [[nodiscard]] std::vector<double> norms() const;

    [[nodiscard]] const std::string& family() const noexcept { return family_; }
    [[nodiscard]] const std::optional<Distribution>& distribution() const noexcept {
        return distribution_;
    }

    [[nodiscard]] double eval(int degree, double x) const;
    /// Fills out[0..p] with phi_0(x)..phi_p(x); out must have order()+1 slots.
    void eval_all(double x, std::span<double> out) const;
    [[nodiscard]] double eval_monic(int degree, double x) const;

    /// Same recurrence coefficients (exact comparison).
    [[nodiscard]] bool same_coefficients(const OrthoBasis& other) const noexcept {
        return gamma_ == other.gamma_ && kappa_ == other.kappa_;
    }

private:
    std::vector<double> gamma_;
    std::vector<double> kappa_;
    std::string family_;
    std::optional<Distribution> distribution_;
};

/// Closed-form recurrences: Hermite (Gaussian), Legendre (uniform),
/// Laguerre (gamma), Jacobi (beta), shifted and scaled to the parameters.
/// Custom distributions are rejected; use stieltjes_basis for those.
[[nodiscard]] OrthoBasis make_standard_basis(const Distribution& dist, int order);

struct StieltjesOptions {
    /// Refinement stops once no coefficient moves by more than this (relative
    /// to max(1, |value|)) between successive panel doublings.
    double tolerance = 1e-10;
    /// Unbounded sides start at mean +- this many stddevs and are pushed out until
    /// the density weighted by the highest polynomial power is negligible.
    double truncation_sigmas = 12.0;
    int initial_panels = 8;
    int max_refinements = 14;
    /// kappa_1 below floor * max(1, gamma_0^2) marks a degenerate measure.
    double kappa_floor = 1e-20;
};

/// Recurrence coefficients of an arbitrary density by the ratio-of-integrals
/// (Stieltjes) procedure, with integrals taken by a composite Gauss-Legendre
/// rule refined until the coefficients settle.
/// Throws NumericError naming the degree j whose kappa_j collapses.
[[nodiscard]] OrthoBasis stieltjes_basis(const Distribution& dist, int order,
                                         const StieltjesOptions& options = {});

/// Discrete Stieltjes procedure against the measure sum_i w_i delta(x - x_i)
/// (weights are normalized to unit mass). The caller is responsible for the
/// rule resolving polynomials of degree 2*order+1 against the target density.
[[nodiscard]] OrthoBasis stieltjes_basis(const QuadratureRule& measure, int order,
                                         std::string family = "stieltjes",
                                         double kappa_floor = 1e-20);

/// Same family at a different order. Requires a named distribution.
[[nodiscard]] OrthoBasis reorder_basis(const OrthoBasis& basis, int order);

/// Basis for the random variable scale * X given the basis of X.
[[nodiscard]] OrthoBasis scale_basis(const OrthoBasis& basis, double scale);

}  // namespace uqsim::polychaos
