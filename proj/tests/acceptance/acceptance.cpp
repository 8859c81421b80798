// Acceptance run: one PASS/FAIL line per criterion, each with its tolerance
// and wall-clock bound. Exit status is nonzero when any criterion fails.

#include "oracles.hpp"

#include "uqsim/anova/anova.hpp"
#include "uqsim/hier/density.hpp"
#include "uqsim/hier/propagate.hpp"
#include "uqsim/hier/surrogate.hpp"
#include "uqsim/models/builtin.hpp"
#include "uqsim/montecarlo/montecarlo.hpp"
#include "uqsim/netlist/mna.hpp"
#include "uqsim/netlist/parser.hpp"
#include "uqsim/polychaos/multi_index.hpp"
#include "uqsim/polychaos/ortho_basis.hpp"
#include "uqsim/polychaos/quadrature.hpp"
#include "uqsim/stsolver/dc.hpp"
#include "uqsim/stsolver/testing_points.hpp"
#include "uqsim/stsolver/transient.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace uqsim;
using polychaos::Distribution;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            if (!detail.str().empty()) detail << "; ";
            detail << what;
            pass = false;
        }
    }
};

struct Criterion {
    int id;
    const char* title;
    double bound_s;
    std::function<void(Verdict&)> body;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

// -- 1 ---------------------------------------------------------------------
void basis_counts(Verdict& v) {
    const std::pair<std::size_t, int> cases[] = {{4, 3}, {3, 3}, {2, 3}};
    const std::size_t expect[] = {35, 20, 10};
    for (int i = 0; i < 3; ++i) {
        const auto [d, p] = cases[i];
        const std::size_t k = polychaos::total_degree_index_set(d, p).size();
        const auto space = stsolver::make_space(std::vector<Distribution>(d, Distribution::gaussian(0, 1)), p);
        v.check(k == expect[i] && space.size() == expect[i],
                "K(p=3,d=" + std::to_string(d) + ")=" + std::to_string(k) + ", testing points " +
                    std::to_string(space.size()));
    }
    v.detail << (v.pass ? "K = 35, 20, 10" : "");
}

// -- 2 ---------------------------------------------------------------------
void anova_counts(Verdict& v) {
    const auto full = anova::full_level_counts(53, 3);
    const auto terms = anova::full_term_count(53, 3);
    const auto samples = anova::sample_count(full, 3);
    v.check(terms == 24858, "full terms " + std::to_string(terms));
    v.check(samples == 482513, "full samples " + std::to_string(samples));
    const std::vector<std::uint64_t> adaptive{53, 36, 0};
    std::uint64_t t = 1;
    for (auto n : adaptive) t += n;
    v.check(t == 90, "adaptive terms " + std::to_string(t));
    const auto s = anova::sample_count(adaptive, 3);
    v.check(s == 573, "adaptive samples " + std::to_string(s));
    if (v.pass) v.detail << "24858 terms / 482513 samples; 90 terms / 573 samples";
}

// -- 3 ---------------------------------------------------------------------
void quadrature_suite(Verdict& v) {
    struct Family {
        const char* name;
        Distribution dist;
        std::vector<double> moments;
        std::function<double(double)> density;  // closed form, independent of the library
    };
    std::vector<double> ramp(20);
    for (int k = 0; k < 20; ++k) ramp[k] = 2.0 / (k + 2);
    const double g25 = std::tgamma(2.5);
    const std::vector<Family> families{
        {"gaussian", Distribution::gaussian(1.0, 0.5), oracle::gaussian_moments(1.0, 0.5, 19),
         [](double x) { return 2.0 * oracle::normal_pdf(2.0 * (x - 1.0)); }},
        {"uniform", Distribution::uniform(2.0, 4.0), oracle::uniform_moments(2.0, 4.0, 19),
         [](double) { return 0.5; }},
        {"gamma", Distribution::gamma(2.5), oracle::gamma_moments(2.5, 19),
         [g25](double x) { return x > 0.0 ? std::pow(x, 1.5) * std::exp(-x) / g25 : 0.0; }},
        {"beta", Distribution::beta(2.0, 3.0), oracle::beta_moments(2.0, 3.0, 19),
         [](double x) { return 12.0 * x * (1.0 - x) * (1.0 - x); }},
        {"custom", Distribution::custom([](double x) { return 2.0 * x; }, 0.0, 1.0, "ramp"), ramp,
         [](double x) { return 2.0 * x; }},
    };
    double worst_exact = 0.0, worst_ortho = 0.0;
    for (const auto& f : families) {
        const auto b = f.dist.is_named() ? polychaos::make_standard_basis(f.dist, 9)
                                         : polychaos::stieltjes_basis(f.dist, 9);
        for (int n = 1; n <= 10; ++n) {
            const auto r = polychaos::golub_welsch(b, n);
            for (int k = 0; k <= 2 * n - 1; ++k) {
                const double q = r.integrate([k](const auto& p) { return std::pow(p[0], k); });
                worst_exact = std::max(worst_exact, std::abs(q - f.moments[k]) / std::abs(f.moments[k]));
            }
        }
        using boost::math::quadrature::gauss_kronrod;
        for (int i = 0; i <= 9; ++i) {
            for (int j = i; j <= 9; ++j) {
                auto fn = [&](double x) { return b.eval(i, x) * b.eval(j, x) * f.density(x); };
                const double val =
                    gauss_kronrod<double, 61>::integrate(fn, f.dist.lower(), f.dist.upper(), 15, 1e-12);
                worst_ortho = std::max(worst_ortho, std::abs(val - (i == j ? 1.0 : 0.0)));
            }
        }
    }
    v.check(worst_exact <= 1e-9, "exactness rel err " + fmt(worst_exact));
    v.check(worst_ortho <= 1e-9, "orthonormality err " + fmt(worst_ortho));
    if (v.pass) v.detail << "max rel exactness err " << fmt(worst_exact) << ", orthonormality err " << fmt(worst_ortho) << " (tol 1e-9)";
}

// -- 4 ---------------------------------------------------------------------
void decoupling(Verdict& v) {
    const auto dae = netlist::elaborate(netlist::parse_netlist(
        "I1 0 a dc 1m\n"
        "R1 a b 1k variation=uniform(-0.1,0.1) mode=relative\n"
        "D1 b 0 variation=gauss(0,0.3) mode=exponential\n"
        "R2 a 0 10k\n"));
    v.check(dae.n == 2 && dae.d == 2, "circuit is not 2-node, d=2");
    const auto space = stsolver::make_space(dae.distributions, 2);
    stsolver::DcOptions opt;
    opt.newton.residual_tol = 1e-14;
    opt.newton.step_tol = 1e-15;
    const auto st = stsolver::solve_dc(dae, space, opt);
    Matrix c0 = Matrix::Zero(static_cast<Eigen::Index>(space.size()), 2);
    c0.row(0) = st.nominal.transpose();
    const Matrix mono = oracle::monolithic_solve(
        [&](const Vector& x, const Vector& xi) { return Vector(dae.f(x, xi)); }, dae.B * dae.u(0.0),
        space.tps.V, space.tps.points, c0);
    const double diff = (mono - st.expansion.coefficients()).cwiseAbs().maxCoeff();
    v.check(diff <= 1e-9, "max coefficient difference " + fmt(diff));
    if (v.pass) v.detail << "max coefficient difference " << fmt(diff) << " (tol 1e-9)";
}

// -- 5 ---------------------------------------------------------------------
void spectral_vs_mc(Verdict& v) {
    const auto b = models::builtin_model("diode_rectifier");
    v.check(b.dae.d == 2, "diode model has d=" + std::to_string(b.dae.d));
    const auto out = static_cast<Eigen::Index>(b.dae.unknown_index(b.output));
    const auto space = stsolver::make_space(b.dae.distributions, 3);
    const auto st = stsolver::solve_dc(b.dae, space);
    montecarlo::McOptions mo;
    mo.samples = 100000;
    mo.seed = 21;
    mo.keep_values = true;
    const auto mc = montecarlo::run_mc_dc(b.dae, mo);
    const auto s = oracle::sample_stats(mc.values.col(out));
    const double zm = std::abs(st.expansion.mean()[out] - s.mean) / s.se_mean;
    const double zs = std::abs(st.expansion.stddev()[out] - s.std) / s.se_std;
    const double ratio = static_cast<double>(mc.n_samples) / static_cast<double>(space.size());
    v.check(space.size() == 10, "K=" + std::to_string(space.size()));
    v.check(zm <= 3.0, "mean off by " + fmt(zm) + " SE");
    v.check(zs <= 3.0, "std off by " + fmt(zs) + " SE");
    v.check(ratio >= 1000.0, "sample ratio " + fmt(ratio));
    if (v.pass) {
        v.detail << "mean " << fmt(zm) << " SE, std " << fmt(zs) << " SE (tol 3); " << space.size()
                 << " solves vs " << mc.n_samples << " MC, ratio " << fmt(ratio) << "x";
    }
}

// -- 6 ---------------------------------------------------------------------
void hierarchical(Verdict& v) {
    // Block: y = xi + 0.3 xi^2 - 0.3, xi standard Gaussian.
    const int p = 3;
    Matrix c(3, 1);
    c << 0.0, 1.0, 0.3 * std::sqrt(2.0);
    const polychaos::GpcExpansion block(polychaos::total_degree_index_set(1, 2),
                                        {polychaos::make_standard_basis(Distribution::gaussian(0, 1), 2)}, c);
    const auto s = hier::normalize_surrogate(block);
    const auto [basis, rule] =
        hier::build_intermediate_basis(hier::density_by_quadrature(s, hier::quadrature_points_for(s, p)), p);
    netlist::ParseOptions po;
    po.allow_zeta = true;
    const auto elab = netlist::elaborate_netlist(netlist::parse_netlist(
        "V1 in 0 pulse(0 1 0 0 0 1 0)\n"
        "R1 in out 1k variation=zeta(1,0.1) mode=relative\n"
        "C1 out 0 1u\n",
        po));
    const auto space = hier::system_space(hier::system_bases(elab, {{1, basis}}, p), p);
    stsolver::TransientOptions opt;
    opt.t1 = 1e-3;
    opt.tol = 1e-6;
    opt.output_times = {1e-3};
    const auto sol = hier::propagate_transient(elab.dae, space, opt);
    const auto out = static_cast<Eigen::Index>(elab.dae.unknown_index("v(out)"));
    const double mean = sol.at(1e-3).mean()[out];
    const double sd = sol.at(1e-3).stddev()[out];

    // Flat Monte Carlo over xi with the closed-form RC step response.
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    const int n = 100000;
    Vector vals(n);
    for (int i = 0; i < n; ++i) {
        const double xi = g(rng);
        const double zeta = (xi + 0.3 * xi * xi - 0.3) / std::sqrt(1.18);
        vals[i] = 1.0 - std::exp(-1.0 / (1.0 + 0.1 * zeta));
    }
    const auto st = oracle::sample_stats(vals);
    const double rm = std::abs(mean - st.mean) / std::abs(st.mean);
    const double rs = std::abs(sd - st.std) / st.std;
    v.check(rm <= 0.01, "mean rel err " + fmt(rm));
    v.check(rs <= 0.01, "std rel err " + fmt(rs));
    if (v.pass) v.detail << "mean rel err " << fmt(rm) << ", std rel err " << fmt(rs) << " (tol 1%)";
}

// -- 7 ---------------------------------------------------------------------
double hermite_n(int n, double x) {
    if (n == 0) return 1.0;
    double a = 1.0, b = x;
    for (int k = 1; k < n; ++k) {
        const double c = x * b - k * a;
        a = b;
        b = c;
    }
    return b / std::sqrt(std::tgamma(n + 1.0));
}

void anova_exactness(Verdict& v) {
    // Telescoping and vanishing on mixed marginals.
    auto g = [](const Vector& x) {
        return 0.3 + x[0] - 2 * x[1] * x[2] + x[0] * x[0] * x[2] + 0.5 * x[0] * x[1] * x[2];
    };
    const std::vector<Distribution> d{Distribution::gaussian(0.5, 1), Distribution::uniform(-1, 2),
                                      Distribution::gamma(2)};
    anova::AnovaOptions o;
    o.m = 3;
    o.p = 3;
    const auto a = anova::adaptive_anova(g, d, o);
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    double tele = 0.0, vanish = 0.0;
    for (int i = 0; i < 100; ++i) {
        Vector x(3);
        for (Eigen::Index k = 0; k < 3; ++k) x[k] = d[static_cast<std::size_t>(k)].quantile(u(rng));
        tele = std::max(tele, std::abs(a.expansion.eval(x) - g(x)));
        for (const auto& t : a.terms) {
            for (std::size_t j = 0; j < t.s.size(); ++j) {
                Vector xs(static_cast<Eigen::Index>(t.s.size()));
                for (std::size_t i2 = 0; i2 < t.s.size(); ++i2) {
                    xs[static_cast<Eigen::Index>(i2)] = x[static_cast<Eigen::Index>(t.s[i2])];
                }
                xs[static_cast<Eigen::Index>(j)] = a.anchor.q[static_cast<Eigen::Index>(t.s[j])];
                vanish = std::max(vanish, std::abs(t.expansion.eval(xs)[0]));
            }
        }
    }
    // Full decomposition against known Hermite coefficients.
    const std::vector<std::pair<std::vector<int>, double>> known{
        {{0, 0, 0}, 0.7}, {{1, 0, 0}, 1.0}, {{0, 2, 0}, -0.4}, {{1, 1, 0}, 0.3},
        {{0, 1, 2}, 0.25}, {{1, 1, 1}, -0.6}, {{0, 0, 3}, 0.1}};
    auto h = [&](const Vector& x) {
        double s = 0.0;
        for (const auto& [al, c] : known) s += c * hermite_n(al[0], x[0]) * hermite_n(al[1], x[1]) * hermite_n(al[2], x[2]);
        return s;
    };
    const auto full = anova::adaptive_anova(h, std::vector<Distribution>(3, Distribution::gaussian(0, 1)), o);
    double direct = 0.0;
    double stray = 0.0;
    for (const auto& [idx, c] : full.expansion.coefficients()) {
        std::vector<int> al(3, 0);
        for (const auto& [var, deg] : idx) al[var] = deg;
        double ref = 0.0;
        for (const auto& [ka, kc] : known) {
            if (ka == al) ref = kc;
        }
        stray = std::max(stray, std::abs(c - ref));
    }
    for (const auto& [al, c] : known) {
        anova::SparseIndex si;
        for (std::uint32_t k = 0; k < 3; ++k) {
            if (al[k] > 0) si.emplace_back(k, al[k]);
        }
        direct = std::max(direct, std::abs(full.expansion.coefficient(si) - c));
    }
    direct = std::max(direct, stray);
    v.check(tele <= 1e-8, "telescoping err " + fmt(tele));
    v.check(vanish <= 1e-8, "vanishing err " + fmt(vanish));
    v.check(direct <= 1e-8, "full-vs-direct err " + fmt(direct));
    if (v.pass) {
        v.detail << "telescoping " << fmt(tele) << ", vanishing " << fmt(vanish) << ", full-vs-direct "
                 << fmt(direct) << " (tol 1e-8)";
    }
}

// -- 8 ---------------------------------------------------------------------
void ishigami(Verdict& v) {
    const double a = 7.0, b = 0.1, pi = std::numbers::pi;
    auto g = [&](const Vector& x) {
        return std::sin(x[0]) + a * std::pow(std::sin(x[1]), 2) + b * std::pow(x[2], 4) * std::sin(x[0]);
    };
    anova::AnovaOptions o;
    o.m = 3;
    o.p = 9;
    const auto dec = anova::adaptive_anova(g, std::vector<Distribution>(3, Distribution::uniform(-pi, pi)), o);
    const auto s = anova::sensitivities(dec.expansion);
    const auto ref = oracle::ishigami(a, b);
    const double e1 = std::abs(s.S[0] - ref.S1), e2 = std::abs(s.S[1] - ref.S2);
    const double e3 = std::abs(s.S[2] - ref.S3), t3 = std::abs(s.T[2] - ref.T3);
    v.check(e1 <= 0.02, "S1 " + fmt(s.S[0]) + " vs " + fmt(ref.S1));
    v.check(e2 <= 0.02, "S2 " + fmt(s.S[1]) + " vs " + fmt(ref.S2));
    v.check(e3 <= 0.02, "S3 " + fmt(s.S[2]) + " vs 0");
    v.check(t3 <= 0.02, "T3 " + fmt(s.T[2]) + " vs " + fmt(ref.T3));
    if (v.pass) {
        v.detail << "S1 " << fmt(s.S[0]) << ", S2 " << fmt(s.S[1]) << ", S3 " << fmt(s.S[2]) << ", T3 "
                 << fmt(s.T[2]) << " (tol 0.02)";
    }
}

// -- 9 ---------------------------------------------------------------------
void integrator_order(Verdict& v) {
    const auto dae = netlist::elaborate(netlist::parse_netlist("V1 in 0 pulse(0 1 0 0 0 1 0)\nR1 in out 1k\nC1 out 0 1u\n"));
    const double tau = 1e-3;
    const auto out = static_cast<Eigen::Index>(dae.unknown_index("v(out)"));
    std::vector<double> hs, errs;
    for (double f : {1e-1, 5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4}) {
        stsolver::TransientOptions opt;
        opt.t1 = tau;
        opt.fixed_step = f * tau;
        opt.newton.residual_tol = 1e-13;
        opt.newton.step_tol = 1e-14;
        const auto traj = stsolver::integrate_points(dae, Matrix(1, 0), Matrix::Zero(1, 3), opt);
        hs.push_back(opt.fixed_step);
        errs.push_back(std::abs(traj.states.back()(0, out) - (1.0 - std::exp(-1.0))));
    }
    const double slope = oracle::loglog_slope(hs, errs);
    v.check(std::abs(slope - 2.0) <= 0.1, "slope " + fmt(slope));
    if (v.pass) v.detail << "slope " << fmt(slope) << " (2.0 +- 0.1)";
}

// -- 10 --------------------------------------------------------------------
void golub_welsch_nodes(Verdict& v) {
    const auto h = polychaos::make_standard_basis(Distribution::gaussian(0, 1), 3);
    const auto h2 = polychaos::golub_welsch(h, 2);
    const auto h3 = polychaos::golub_welsch(h, 3);
    const auto l2 = polychaos::golub_welsch(polychaos::make_standard_basis(Distribution::uniform(-1, 1), 1), 2);
    const double r3 = std::sqrt(3.0);
    const std::vector<std::pair<double, double>> pairs{
        {h2.points(0, 0), -1.0}, {h2.points(1, 0), 1.0}, {h2.weights[0], 0.5}, {h2.weights[1], 0.5},
        {h3.points(0, 0), -r3}, {h3.points(1, 0), 0.0}, {h3.points(2, 0), r3},
        {h3.weights[0], 1.0 / 6}, {h3.weights[1], 2.0 / 3}, {h3.weights[2], 1.0 / 6},
        {l2.points(0, 0), -1.0 / r3}, {l2.points(1, 0), 1.0 / r3}, {l2.weights[0], 0.5}, {l2.weights[1], 0.5}};
    double worst = 0.0;
    for (const auto& [got, want] : pairs) worst = std::max(worst, std::abs(got - want));
    v.check(worst <= 1e-10, "max node/weight err " + fmt(worst));
    if (v.pass) v.detail << "max node/weight err " << fmt(worst) << " (tol 1e-10)";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "basis-count golden values", 1.0, basis_counts},
        {2, "ANOVA combinatorics", 1.0, anova_counts},
        {3, "quadrature exactness and orthonormality", 10.0, quadrature_suite},
        {4, "decoupled vs monolithic Newton", 60.0, decoupling},
        {5, "spectral vs Monte Carlo, diode DC", 120.0, spectral_vs_mc},
        {6, "hierarchical vs flat, two-level toy", 120.0, hierarchical},
        {7, "anchored-ANOVA exactness", 30.0, anova_exactness},
        {8, "Ishigami sensitivity", 60.0, ishigami},
        {9, "transient integrator order", 30.0, integrator_order},
        {10, "Golub-Welsch closed-form nodes", 1.0, golub_welsch_nodes},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Verdict v;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(v);
        } catch (const std::exception& e) {
            v.check(false, std::string("threw: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        v.check(secs <= c.bound_s, "runtime " + fmt(secs) + " s over bound");
        failed += !v.pass;
        std::printf("criterion %d: %s  %s -- %s [%.2f s, bound %.0f s]\n", c.id, v.pass ? "PASS" : "FAIL",
                    c.title, v.detail.str().c_str(), secs, c.bound_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
