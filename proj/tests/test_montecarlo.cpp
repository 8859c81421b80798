#include "oracles.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/models/builtin.hpp"
#include "uqsim/montecarlo/montecarlo.hpp"
#include "uqsim/polychaos/multi_index.hpp"
#include "uqsim/polychaos/ortho_basis.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace uqsim;
using namespace uqsim::montecarlo;
using polychaos::Distribution;

TEST(Sampling, UniformMean) {
    const Matrix s = sample_parameters({Distribution::uniform(0, 1)}, 1000000, 3);
    EXPECT_NEAR(s.col(0).mean(), 0.5, 0.002);
    EXPECT_GT(s.minCoeff(), 0.0);
    EXPECT_LT(s.maxCoeff(), 1.0);
}

TEST(Sampling, GaussianVariance) {
    const Matrix s = sample_parameters({Distribution::gaussian(0, 1)}, 1000000, 4);
    const auto st = oracle::sample_stats(s.col(0));
    EXPECT_NEAR(st.std * st.std, 1.0, 0.005);
}

TEST(Sampling, SeedReproducibleAndDistinct) {
    const std::vector<Distribution> d{Distribution::gaussian(1, 2), Distribution::beta(2, 3)};
    const Matrix a = sample_parameters(d, 1000, 7);
    EXPECT_EQ(a, sample_parameters(d, 1000, 7));
    EXPECT_NE(a, sample_parameters(d, 1000, 8));
    // A prefix of a longer run is the shorter run.
    EXPECT_EQ(a, sample_parameters(d, 2000, 7).topRows(1000));
}

TEST(Sampling, SplitMixMatchesReferenceAlgorithm) {
    std::uint64_t x = 1234567;
    auto reference = [&x] {
        std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    };
    SplitMix64 g(1234567);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(g.next(), reference());
}

TEST(Sampling, ThreadCountDoesNotChangeResults) {
    const auto b = models::builtin_model("diode_rectifier");
    McOptions o;
    o.samples = 2000;
    o.seed = 9;
    o.threads = 1;
    const auto one = run_mc_dc(b.dae, o);
    o.threads = 4;
    const auto four = run_mc_dc(b.dae, o);
    EXPECT_EQ(one.mean, four.mean);
    EXPECT_EQ(one.variance, four.variance);
    EXPECT_EQ(one.histograms[1].counts, four.histograms[1].counts);
}

TEST(RunMc, DividerMatchesAnalyticMean) {
    const auto b = models::builtin_model("divider");
    McOptions o;
    o.samples = 100000;
    o.seed = 11;
    const auto r = run_mc_dc(b.dae, o);
    const auto out = static_cast<Eigen::Index>(b.dae.unknown_index("v(out)"));
    const double exact = 1.0 - std::log(2.1 / 1.9) / 0.2;
    EXPECT_EQ(r.n_samples, 100000u);
    EXPECT_NEAR(r.mean[out], exact, 3.0 * r.std_error[out]);
}

TEST(RunMc, DeterministicModelHasZeroVariance) {
    const auto b = models::builtin_model("divider", {{"tol", 0.1}});
    models::StochasticDae d0 = b.dae;
    const auto fixed = models::restrict_parameters(d0, {}, d0.nominal());
    McOptions o;
    o.samples = 50;
    const auto r = run_mc_dc(fixed, o);
    EXPECT_EQ(r.variance.maxCoeff(), 0.0);
    EXPECT_NEAR(r.mean[1], 0.5, 1e-12);
}

TEST(RunMc, SurrogateMatchesParseval) {
    const auto idx = polychaos::total_degree_index_set(2, 3);
    const std::vector<Distribution> d{Distribution::gaussian(0, 1), Distribution::uniform(-1, 1)};
    std::vector<polychaos::OrthoBasis> bases;
    for (const auto& x : d) bases.push_back(polychaos::make_standard_basis(x, 3));
    Matrix c(idx.size(), 1);
    for (Eigen::Index k = 0; k < c.rows(); ++k) c(k, 0) = 1.0 / (1.0 + k);
    const polychaos::GpcExpansion e(idx, bases, c);
    McOptions o;
    o.samples = 200000;
    o.seed = 2;
    o.keep_values = true;
    const auto r = run_mc([&](const Vector& xi) { return e.eval(xi); }, d, o);
    const auto s = oracle::sample_stats(r.values.col(0));
    EXPECT_NEAR(s.mean, e.mean()[0], 3 * s.se_mean);
    EXPECT_NEAR(s.std, e.stddev()[0], 3 * s.se_std);
    EXPECT_NEAR(r.mean[0], s.mean, 1e-12);
}

TEST(RunMc, FailureBudget) {
    McOptions o;
    o.samples = 1000;
    int calls = 0;
    auto flaky = [&](const Vector& xi) {
        ++calls;
        if (xi[0] > 0.99) throw NumericError("no convergence");
        return Vector(xi);
    };
    EXPECT_THROW((void)run_mc(flaky, {Distribution::uniform(0, 1)}, o), NumericError);
    auto rare = [](const Vector& xi) {
        if (xi[0] > 0.9995) throw NumericError("no convergence");
        return Vector(xi);
    };
    const auto r = run_mc(rare, {Distribution::uniform(0, 1)}, o);
    EXPECT_EQ(r.n_samples + r.failed, 1000u);
}

TEST(Histogram, CountsEverySample) {
    McOptions o;
    o.samples = 5000;
    o.bins = 20;
    const auto r = run_mc([](const Vector& xi) { return Vector(xi); }, {Distribution::gaussian(0, 1)}, o);
    std::size_t total = 0;
    for (auto c : r.histograms[0].counts) total += c;
    EXPECT_EQ(total, 5000u);
    EXPECT_EQ(r.histograms[0].edges.size(), 21u);
    EXPECT_EQ(histogram_csv(r.histograms[0]).rfind("bin_left,bin_right,count\n", 0), 0u);
}
