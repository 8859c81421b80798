#include "uqsim/polychaos/distribution.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/polychaos/quadrature.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/distributions/gamma.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uqsim::polychaos {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kCdfPanels = 2048;
constexpr int kPanelPoints = 10;

double integrate_adaptive(const std::function<double(double)>& fn, double lo, double hi) {
    using boost::math::quadrature::gauss_kronrod;
    return gauss_kronrod<double, 61>::integrate(fn, lo, hi, 20, 1e-13);
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

struct Distribution::CustomData {
    DensityFn density;
    // CDF table over [table_lo, table_hi]; cumulative[i] is the mass left of panel i.
    double table_lo = 0.0;
    double table_hi = 0.0;
    std::vector<double> cumulative;
    std::vector<double> gl_nodes;
    std::vector<double> gl_weights;

    [[nodiscard]] double panel_width() const {
        return (table_hi - table_lo) / kCdfPanels;
    }

    [[nodiscard]] double partial(int panel, double x) const {
        const double a = table_lo + panel * panel_width();
        const double half = 0.5 * (x - a);
        const double mid = 0.5 * (x + a);
        double sum = 0.0;
        for (std::size_t k = 0; k < gl_nodes.size(); ++k) {
            sum += gl_weights[k] * density(mid + half * gl_nodes[k]);
        }
        return sum * half;
    }

    [[nodiscard]] double cdf(double x) const {
        if (x <= table_lo) return 0.0;
        if (x >= table_hi) return 1.0;
        const int panel = std::min(kCdfPanels - 1,
                                   static_cast<int>((x - table_lo) / panel_width()));
        return std::clamp(cumulative[panel] + partial(panel, x), 0.0, 1.0);
    }
};

std::string_view to_string(Family family) noexcept {
    switch (family) {
        case Family::Gaussian: return "gaussian";
        case Family::Uniform: return "uniform";
        case Family::Gamma: return "gamma";
        case Family::Beta: return "beta";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

Distribution Distribution::gaussian(double mean, double stddev) {
    if (!(stddev > 0.0) || !std::isfinite(mean) || !std::isfinite(stddev)) {
        throw InputError("gaussian distribution requires stddev > 0");
    }
    Distribution d;
    d.family_ = Family::Gaussian;
    d.params_ = {mean, stddev};
    d.label_ = "gaussian";
    d.lo_ = -kInf;
    d.hi_ = kInf;
    d.mean_ = mean;
    d.stddev_ = stddev;
    return d;
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InputError("uniform distribution requires finite lo < hi");
    }
    Distribution d;
    d.family_ = Family::Uniform;
    d.params_ = {lo, hi};
    d.label_ = "uniform";
    d.lo_ = lo;
    d.hi_ = hi;
    d.mean_ = 0.5 * (lo + hi);
    d.stddev_ = (hi - lo) / std::sqrt(12.0);
    return d;
}

Distribution Distribution::gamma(double shape) {
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw InputError("gamma distribution requires shape > 0");
    }
    Distribution d;
    d.family_ = Family::Gamma;
    d.params_ = {shape};
    d.label_ = "gamma";
    d.lo_ = 0.0;
    d.hi_ = kInf;
    d.mean_ = shape;
    d.stddev_ = std::sqrt(shape);
    return d;
}

Distribution Distribution::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw InputError("beta distribution requires a > 0 and b > 0");
    }
    Distribution d;
    d.family_ = Family::Beta;
    d.params_ = {a, b};
    d.label_ = "beta";
    d.lo_ = 0.0;
    d.hi_ = 1.0;
    d.mean_ = a / (a + b);
    d.stddev_ = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)));
    return d;
}

Distribution Distribution::custom(DensityFn density, double lo, double hi, std::string label) {
    if (!density) throw InputError("custom distribution needs a density function");
    if (!(lo < hi)) throw InputError("custom distribution requires lo < hi");

    const double mass = integrate_adaptive(density, lo, hi);
    if (!std::isfinite(mass) || std::abs(mass - 1.0) > 1e-8) {
        throw InputError("custom density '" + label + "' integrates to " + format_number(mass) +
                         ", expected 1 within 1e-8");
    }
    const double mean = integrate_adaptive([&](double x) { return x * density(x); }, lo, hi);
    const double var = integrate_adaptive(
        [&](double x) { return (x - mean) * (x - mean) * density(x); }, lo, hi);
    if (!(var > 0.0) || !std::isfinite(var)) {
        throw InputError("custom density '" + label + "' has no finite positive variance");
    }

    auto data = std::make_shared<CustomData>();
    data->density = std::move(density);
    const double sd = std::sqrt(var);
    data->table_lo = std::isfinite(lo) ? lo : mean - 40.0 * sd;
    data->table_hi = std::isfinite(hi) ? hi : mean + 40.0 * sd;
    if (std::isfinite(lo)) data->table_lo = std::max(lo, data->table_lo);
    if (std::isfinite(hi)) data->table_hi = std::min(hi, data->table_hi);

    const auto gl = detail::gauss_legendre(kPanelPoints);
    data->gl_nodes = gl.first;
    data->gl_weights = gl.second;

    data->cumulative.assign(kCdfPanels + 1, 0.0);
    for (int i = 0; i < kCdfPanels; ++i) {
        const double b = data->table_lo + (i + 1) * data->panel_width();
        data->cumulative[i + 1] = data->cumulative[i] + data->partial(i, b);
    }
    const double total = data->cumulative.back();
    for (double& c : data->cumulative) c /= total;

    Distribution d;
    d.family_ = Family::Custom;
    d.label_ = std::move(label);
    d.lo_ = lo;
    d.hi_ = hi;
    d.mean_ = mean;
    d.stddev_ = sd;
    d.custom_ = std::move(data);
    return d;
}

double Distribution::density(double x) const {
    switch (family_) {
        case Family::Gaussian: {
            const double z = (x - params_[0]) / params_[1];
            return std::exp(-0.5 * z * z) / (params_[1] * std::sqrt(2.0 * M_PI));
        }
        case Family::Uniform:
            return (x >= lo_ && x <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
        case Family::Gamma:
            if (x <= 0.0) return 0.0;
            return boost::math::pdf(boost::math::gamma_distribution<>(params_[0]), x);
        case Family::Beta:
            if (x <= 0.0 || x >= 1.0) return 0.0;
            return boost::math::pdf(boost::math::beta_distribution<>(params_[0], params_[1]), x);
        case Family::Custom:
            if (x < lo_ || x > hi_) return 0.0;
            return custom_->density(x);
    }
    return 0.0;
}

double Distribution::cdf(double x) const {
    switch (family_) {
        case Family::Gaussian:
            return 0.5 * std::erfc(-(x - params_[0]) / (params_[1] * std::sqrt(2.0)));
        case Family::Uniform:
            return std::clamp((x - lo_) / (hi_ - lo_), 0.0, 1.0);
        case Family::Gamma:
            if (x <= 0.0) return 0.0;
            return boost::math::cdf(boost::math::gamma_distribution<>(params_[0]), x);
        case Family::Beta:
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return boost::math::cdf(boost::math::beta_distribution<>(params_[0], params_[1]), x);
        case Family::Custom:
            return custom_->cdf(x);
    }
    return 0.0;
}

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0) return lo_;
        if (u == 1.0) return hi_;
        throw InputError("quantile requires u in [0, 1]");
    }
    switch (family_) {
        case Family::Gaussian:
            return boost::math::quantile(boost::math::normal_distribution<>(params_[0], params_[1]),
                                         u);
        case Family::Uniform:
            return lo_ + u * (hi_ - lo_);
        case Family::Gamma:
            return boost::math::quantile(boost::math::gamma_distribution<>(params_[0]), u);
        case Family::Beta:
            return boost::math::quantile(
                boost::math::beta_distribution<>(params_[0], params_[1]), u);
        case Family::Custom: {
            const auto& c = *custom_;
            const auto it = std::upper_bound(c.cumulative.begin(), c.cumulative.end(), u);
            int panel = static_cast<int>(it - c.cumulative.begin()) - 1;
            panel = std::clamp(panel, 0, kCdfPanels - 1);
            double a = c.table_lo + panel * c.panel_width();
            double b = a + c.panel_width();
            auto f = [&](double x) { return c.cdf(x) - u; };
            double fa = f(a);
            double fb = f(b);
            if (fa >= 0.0) return a;
            if (fb <= 0.0) return b;
            std::uintmax_t iters = 200;
            const auto [lo, hi] = boost::math::tools::toms748_solve(
                f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), iters);
            return 0.5 * (lo + hi);
        }
    }
    return 0.0;
}

bool Distribution::operator==(const Distribution& other) const noexcept {
    if (family_ != other.family_) return false;
    if (family_ == Family::Custom) return custom_ == other.custom_;
    return params_ == other.params_;
}

std::string Distribution::describe() const {
    if (family_ == Family::Custom) return "custom(" + label_ + ")";
    std::string out(to_string(family_));
    out += '(';
    for (std::size_t i = 0; i < params_.size(); ++i) {
        if (i) out += ',';
        out += format_number(params_[i]);
    }
    out += ')';
    return out;
}

}  // namespace uqsim::polychaos
