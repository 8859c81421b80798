#include "uqsim/montecarlo/montecarlo.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"
#include "uqsim/common/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace uqsim::montecarlo {

std::uint64_t SplitMix64::next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 a(seed);
    SplitMix64 b(a.next() ^ (index * 0xD1B54A32D192ED03ULL));
    return b.next();
}

Matrix sample_parameters(const std::vector<Distribution>& distributions, std::size_t n,
                         std::uint64_t seed) {
    const auto d = static_cast<Eigen::Index>(distributions.size());
    Matrix out(static_cast<Eigen::Index>(n), d);
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng(stream_seed(seed, i));
        for (Eigen::Index k = 0; k < d; ++k) {
            out(static_cast<Eigen::Index>(i), k) =
                distributions[static_cast<std::size_t>(k)].quantile(rng.uniform());
        }
    }
    return out;
}

std::string histogram_csv(const Histogram& histogram) {
    std::string out = "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < histogram.counts.size(); ++b) {
        out += format_double(histogram.edges[b]) + "," + format_double(histogram.edges[b + 1]) +
               "," + std::to_string(histogram.counts[b]) + "\n";
    }
    return out;
}

namespace {

Histogram make_histogram(const Matrix& values, Eigen::Index col, std::size_t bins) {
    Histogram h;
    bins = std::max<std::size_t>(1, bins);
    double lo = values.col(col).minCoeff();
    double hi = values.col(col).maxCoeff();
    if (!(hi > lo)) {
        const double pad = std::max(1e-12, std::abs(lo) * 1e-12);
        lo -= pad;
        hi += pad;
    }
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + width * static_cast<double>(b);
    h.edges[bins] = hi;
    h.counts.assign(bins, 0);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        auto b = static_cast<std::size_t>((values(i, col) - lo) / width);
        h.counts[std::min(b, bins - 1)] += 1;
    }
    return h;
}

}  // namespace

McResult run_mc(const SampleFn& fn, const std::vector<Distribution>& distributions,
                const McOptions& options) {
    if (options.samples < 1) throw InputError("Monte Carlo needs at least one sample");
    const Matrix xi = sample_parameters(distributions, options.samples, options.seed);
    std::vector<std::optional<Vector>> raw(options.samples);
    parallel_for(options.samples, options.threads, [&](std::size_t i) {
        try {
            Vector v = fn(xi.row(static_cast<Eigen::Index>(i)).transpose());
            if (v.allFinite()) raw[i] = std::move(v);
        } catch (const NumericError&) {
        }
    });

    McResult out;
    out.seed = options.seed;
    Eigen::Index width = -1;
    for (const auto& r : raw) {
        if (!r) {
            ++out.failed;
            continue;
        }
        if (width < 0) width = r->size();
        if (r->size() != width) throw InputError("Monte Carlo: sample outputs differ in size");
    }
    const double budget = options.failure_budget * static_cast<double>(options.samples);
    if (static_cast<double>(out.failed) > budget || width < 0) {
        throw NumericError("Monte Carlo: " + std::to_string(out.failed) + " of " +
                           std::to_string(options.samples) +
                           " samples failed, above the failure budget");
    }
    out.n_samples = options.samples - out.failed;
    Matrix values(static_cast<Eigen::Index>(out.n_samples), width);
    Eigen::Index row = 0;
    for (const auto& r : raw) {
        if (r) values.row(row++) = r->transpose();
    }
    const double n = static_cast<double>(out.n_samples);
    out.mean = Vector::Zero(width);
    for (Eigen::Index i = 0; i < values.rows(); ++i) out.mean += values.row(i).transpose();
    out.mean /= n;
    // Constant outputs come back exact rather than with rounding noise.
    for (Eigen::Index k = 0; k < width; ++k) {
        if (values.rows() > 0 && values.col(k).minCoeff() == values.col(k).maxCoeff()) {
            out.mean[k] = values(0, k);
        }
    }
    out.variance = Vector::Zero(width);
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        out.variance += (values.row(i).transpose() - out.mean).cwiseAbs2();
    }
    out.variance /= out.n_samples > 1 ? n - 1.0 : 1.0;
    out.std_error = (out.variance / n).cwiseSqrt();
    for (Eigen::Index c = 0; c < width; ++c) out.histograms.push_back(make_histogram(values, c, options.bins));
    if (options.keep_values) out.values = std::move(values);
    return out;
}

McResult run_mc_dc(const models::StochasticDae& model, const McOptions& options,
                   const stsolver::NewtonOptions& newton, double t) {
    model.validate();
    const Vector start = stsolver::solve_operating_point(
                             model, model.nominal(), Vector::Zero(static_cast<Eigen::Index>(model.n)),
                             newton, t)
                             .x;
    SampleFn fn = [&](const Vector& xi) {
        stsolver::NewtonResult r = stsolver::solve_operating_point(model, xi, start, newton, t);
        if (!r.converged) throw NumericError("DC sample did not converge");
        return r.x;
    };
    return run_mc(fn, model.distributions, options);
}

McResult run_mc_transient(const models::StochasticDae& model, double t_star,
                          const stsolver::TransientOptions& transient, const McOptions& options) {
    model.validate();
    if (!(t_star > transient.t0)) throw InputError("Monte Carlo transient: t* must exceed t0");
    stsolver::TransientOptions topt = transient;
    topt.t1 = t_star;
    topt.output_times = {t_star};
    topt.threads = 1;
    const Vector start = stsolver::solve_operating_point(
                             model, model.nominal(), Vector::Zero(static_cast<Eigen::Index>(model.n)),
                             transient.newton, transient.t0)
                             .x;
    SampleFn fn = [&](const Vector& xi) {
        const Vector x0 =
            stsolver::solve_operating_point(model, xi, start, transient.newton, transient.t0).x;
        const stsolver::PointTrajectory traj =
            stsolver::integrate_points(model, xi.transpose(), x0.transpose(), topt);
        return Vector(traj.states.back().row(0).transpose());
    };
    return run_mc(fn, model.distributions, options);
}

}  // namespace uqsim::montecarlo
