#include "uqsim/hier/density.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/montecarlo/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uqsim::hier {

IntermediateDensity IntermediateDensity::from_rule(QuadratureRule rule, int exact_degree) {
    if (rule.dimension() != 1 || rule.size() == 0) {
        throw InputError("intermediate measure must be a non-empty univariate rule");
    }
    const double mass = rule.weights.sum();
    if (!(mass > 0.0)) throw InputError("intermediate measure has no mass");
    IntermediateDensity d;
    d.route_ = Route::Quadrature;
    rule.weights /= mass;
    d.lo_ = rule.points.col(0).minCoeff();
    d.hi_ = rule.points.col(0).maxCoeff();
    d.exact_degree_ = exact_degree;
    d.rule_ = std::move(rule);
    return d;
}

IntermediateDensity IntermediateDensity::fitted(std::vector<double> knots,
                                                std::vector<double> values,
                                                std::vector<double> bumps) {
    if (knots.size() < 2 || values.size() != knots.size() || bumps.size() + 1 != knots.size()) {
        throw InputError("fitted density needs matching knots and values");
    }
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
        if (!(knots[k + 1] > knots[k])) throw InputError("fitted density knots must increase");
    }
    IntermediateDensity d;
    d.route_ = Route::Fitted;
    d.lo_ = knots.front();
    d.hi_ = knots.back();
    d.exact_degree_ = std::numeric_limits<int>::max();
    d.knots_ = std::move(knots);
    d.values_ = std::move(values);
    d.bumps_ = std::move(bumps);
    double mass = 0.0;
    const std::size_t segs = d.knots_.size() - 1;
    for (std::size_t k = 0; k < segs; ++k) {
        const double c = d.bumps_[k];
        mass += (d.knots_[k + 1] - d.knots_[k]) * ((d.values_[k] + d.values_[k + 1]) / 2.0 + c / 6.0);
    }
    if (!(mass > 0.0)) throw NumericError("fitted density has no mass");
    d.scale_ = 1.0 / mass;
    return d;
}

double IntermediateDensity::segment_density(std::size_t k, double t) const {
    const double c = bumps_[k];
    return scale_ * (values_[k] * (1.0 - t) + values_[k + 1] * t + c * t * (1.0 - t));
}

double IntermediateDensity::density(double z) const {
    if (route_ == Route::Quadrature) {
        throw InputError("a quadrature-backed intermediate density has no pointwise form");
    }
    if (z < lo_ || z > hi_) return 0.0;
    auto it = std::upper_bound(knots_.begin(), knots_.end(), z);
    std::size_t k = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
    k = std::min(k, knots_.size() - 2);
    const double t = (z - knots_[k]) / (knots_[k + 1] - knots_[k]);
    return std::max(0.0, segment_density(k, t));
}

double IntermediateDensity::cdf(double z) const {
    if (route_ == Route::Quadrature) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < rule_.weights.size(); ++i) {
            if (rule_.points(i, 0) <= z) sum += rule_.weights[i];
        }
        return sum;
    }
    if (z <= lo_) return 0.0;
    if (z >= hi_) return 1.0;
    const std::size_t segs = knots_.size() - 1;
    double sum = 0.0;
    for (std::size_t k = 0; k < segs; ++k) {
        const double dx = knots_[k + 1] - knots_[k];
        const double c = bumps_[k];
        const double t = std::min(1.0, (z - knots_[k]) / dx);
        sum += scale_ * dx *
               (values_[k] * (t - t * t / 2.0) + values_[k + 1] * t * t / 2.0 +
                c * (t * t / 2.0 - t * t * t / 3.0));
        if (z <= knots_[k + 1]) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

QuadratureRule IntermediateDensity::moment_rule(int degree) const {
    if (degree < 0) throw InputError("moment degree must be >= 0");
    if (route_ == Route::Quadrature) {
        if (degree > exact_degree_) {
            throw InputError("intermediate density rule is exact to degree " +
                             std::to_string(exact_degree_) + " but degree " +
                             std::to_string(degree) + " was requested; raise the rule order");
        }
        return rule_;
    }
    // The density is quadratic per segment.
    const int ng = (degree + 2) / 2 + 1;
    const auto& gl = polychaos::detail::gauss_legendre(ng);
    const std::size_t segs = knots_.size() - 1;
    QuadratureRule out;
    out.points.resize(static_cast<Eigen::Index>(segs * static_cast<std::size_t>(ng)), 1);
    out.weights.resize(out.points.rows());
    Eigen::Index r = 0;
    for (std::size_t k = 0; k < segs; ++k) {
        const double dx = knots_[k + 1] - knots_[k];
        for (int i = 0; i < ng; ++i) {
            const double t = (gl.first[static_cast<std::size_t>(i)] + 1.0) / 2.0;
            out.points(r, 0) = knots_[k] + dx * t;
            out.weights[r] = dx / 2.0 * gl.second[static_cast<std::size_t>(i)] * segment_density(k, t);
            ++r;
        }
    }
    return out;
}

double IntermediateDensity::mean() const {
    const QuadratureRule q = moment_rule(1);
    return q.weights.dot(q.points.col(0)) / q.weights.sum();
}

double IntermediateDensity::variance() const {
    const QuadratureRule q = moment_rule(2);
    const double mass = q.weights.sum();
    const double mu = q.weights.dot(q.points.col(0)) / mass;
    return q.weights.dot((q.points.col(0).array() - mu).square().matrix()) / mass;
}

namespace {

// Largest per-coordinate degree among the nonzero terms.
int coordinate_degree(const GpcExpansion& e) {
    int q = 0;
    for (std::size_t k = 0; k < e.terms(); ++k) {
        if (e.coefficients()(static_cast<Eigen::Index>(k), 0) == 0.0) continue;
        for (int a : e.index_set()[k]) q = std::max(q, a);
    }
    return q;
}

}  // namespace

IntermediateDensity density_by_quadrature(const Surrogate& surrogate, int points_per_dim) {
    if (points_per_dim < 1) throw InputError("quadrature route needs at least one point per dimension");
    const GpcExpansion& z = surrogate.zeta;
    std::vector<QuadratureRule> rules;
    for (const OrthoBasis& b : z.bases()) {
        OrthoBasis raised = b;
        if (b.order() < points_per_dim - 1) {
            const auto& dist = b.distribution();
            if (!dist) {
                throw InputError("surrogate basis has no distribution; cannot build a " +
                                 std::to_string(points_per_dim) + "-point rule");
            }
            raised = dist->is_named() ? polychaos::make_standard_basis(*dist, points_per_dim - 1)
                                      : polychaos::stieltjes_basis(*dist, points_per_dim - 1);
        }
        rules.push_back(polychaos::golub_welsch(raised, points_per_dim));
    }
    QuadratureRule grid;
    if (rules.empty()) {
        grid.points = Matrix::Zero(1, 0);
        grid.weights = Vector::Ones(1);
    } else {
        grid = polychaos::tensor_quadrature(rules);
    }
    QuadratureRule push;
    push.points.resize(grid.points.rows(), 1);
    push.weights = grid.weights;
    for (Eigen::Index i = 0; i < grid.points.rows(); ++i) {
        push.points(i, 0) = z.eval(grid.points.row(i).transpose())[0];
    }
    const int q = std::max(1, coordinate_degree(z));
    return IntermediateDensity::from_rule(std::move(push), (2 * points_per_dim - 1) / q);
}

int quadrature_points_for(const Surrogate& surrogate, int p) {
    const int q = std::max(1, coordinate_degree(surrogate.zeta));
    return ((2 * p + 1) * q + 2) / 2;
}

IntermediateDensity fit_density(std::vector<double> s, const SamplingOptions& options) {
    if (s.size() < 2) throw InputError("density fit needs samples");
    if (options.segments < 2) throw InputError("density fit needs at least two segments");
    std::sort(s.begin(), s.end());
    if (!(s.back() > s.front())) throw InputError("degenerate samples: all values are equal");
    auto quantile = [&s](double u) {
        const double pos = u * static_cast<double>(s.size() - 1);
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= s.size()) return s.back();
        const double f = pos - static_cast<double>(i);
        return s[i] + f * (s[i + 1] - s[i]);
    };
    const double n = static_cast<double>(s.size());
    const double N = static_cast<double>(options.segments);

    // Equiprobable knots, with the two end segments split geometrically
    // (quantiles 1/(2N), 1/(4N), ...) while a piece still holds kTailSamples.
    constexpr double kTailSamples = 16.0;
    std::vector<double> probs{0.0};
    std::vector<double> tail;
    for (double u = 0.5 / N; u * n >= kTailSamples; u *= 0.5) tail.push_back(u);
    for (auto it = tail.rbegin(); it != tail.rend(); ++it) probs.push_back(*it);
    for (std::size_t k = 1; k < options.segments; ++k) probs.push_back(static_cast<double>(k) / N);
    for (double u : tail) probs.push_back(1.0 - u);
    probs.push_back(1.0);

    std::vector<double> x;
    for (double u : probs) x.push_back(quantile(u));
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
        if (!(x[k + 1] > x[k])) {
            throw InputError("degenerate samples: repeated values collapse the quantile knots");
        }
    }
    const std::size_t K = x.size() - 1;  // segments
    std::vector<double> m(K + 1, 0.0);
    for (std::size_t k = 1; k < K; ++k) {
        const std::size_t w = std::min({options.window, k, K - k});
        const double h = std::min(x[k] - x[k - w], x[k + w] - x[k]);
        const auto first = std::lower_bound(s.begin(), s.end(), x[k] - h);
        const auto last = std::upper_bound(s.begin(), s.end(), x[k] + h);
        m[k] = static_cast<double>(last - first) / (n * 2.0 * h);
    }
    // An end segment's density rises from 0 at the extreme sample; the most
    // mass a nonnegative quadratic can then put there is dx * b / 3, so the
    // inner knot value is capped to keep the end mass attainable.
    for (const std::size_t k : {std::size_t{0}, K - 1}) {
        const double share = probs[k + 1] - probs[k];
        const double dx = x[k + 1] - x[k];
        const std::size_t inner = k == 0 ? 1 : K - 1;
        m[inner] = std::min(m[inner], 3.0 * share / dx);
    }
    // Segments within kMatchedSegments equiprobable widths of either end carry
    // exactly their empirical share of the mass; interior segments stay linear
    // in the smoothed knot values. The t(1-t) coefficient is kept
    // >= -(sqrt a + sqrt b)^2 so the density stays nonnegative.
    constexpr double kMatchedSegments = 3.0;
    std::vector<double> bumps(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        const double lo_p = probs[k], hi_p = probs[k + 1];
        const bool in_tail = lo_p < kMatchedSegments / N - 1e-12 || hi_p > 1.0 - kMatchedSegments / N + 1e-12;
        if (!in_tail) continue;
        const double dx = x[k + 1] - x[k];
        const double share = hi_p - lo_p;
        const double a = m[k];
        const double b = m[k + 1];
        const double floor = -std::pow(std::sqrt(a) + std::sqrt(b), 2);
        bumps[k] = std::max(6.0 * share / dx - 3.0 * (a + b), floor);
    }
    return IntermediateDensity::fitted(std::move(x), std::move(m), std::move(bumps));
}

IntermediateDensity density_by_sampling(const Surrogate& surrogate, const SamplingOptions& options) {
    if (options.samples < 10000) throw InputError("sampling route needs at least 1e4 samples");
    std::vector<polychaos::Distribution> dists;
    for (const OrthoBasis& b : surrogate.zeta.bases()) {
        if (!b.distribution()) {
            throw InputError("surrogate basis has no distribution to sample from");
        }
        dists.push_back(*b.distribution());
    }
    const Matrix xi = montecarlo::sample_parameters(dists, options.samples, options.seed);
    std::vector<double> z(options.samples);
    for (std::size_t i = 0; i < options.samples; ++i) {
        z[i] = surrogate.eval_zeta(xi.row(static_cast<Eigen::Index>(i)).transpose());
    }
    return fit_density(std::move(z), options);
}

std::pair<OrthoBasis, QuadratureRule> build_intermediate_basis(const IntermediateDensity& density,
                                                               int p) {
    if (p < 0) throw InputError("basis order must be >= 0");
    const QuadratureRule measure = density.moment_rule(2 * p + 1);
    OrthoBasis basis = polychaos::stieltjes_basis(measure, p, "zeta");
    QuadratureRule rule = polychaos::golub_welsch(basis, p + 1);
    return {std::move(basis), std::move(rule)};
}

}  // namespace uqsim::hier
