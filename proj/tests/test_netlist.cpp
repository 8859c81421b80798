#include "uqsim/common/error.hpp"
#include "uqsim/netlist/mna.hpp"
#include "uqsim/netlist/parser.hpp"
#include "uqsim/netlist/printer.hpp"
#include "uqsim/stsolver/newton.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <random>

using namespace uqsim;
using namespace uqsim::netlist;

namespace {

std::string error_of(const std::string& text, const ParseOptions& opt = {}) {
    try {
        (void)parse_netlist(text, opt);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

Vector dc(const models::StochasticDae& dae, const Vector& xi) {
    const auto r = stsolver::solve_operating_point(dae, xi, Vector::Zero(dae.n));
    EXPECT_TRUE(r.converged);
    return r.x;
}

}  // namespace

TEST(Parser, Resistor) {
    const Netlist nl = parse_netlist("R1 1 0 1k\nV1 1 0 dc 1\n");
    ASSERT_EQ(nl.elements.size(), 2u);
    const Element& r = nl.elements[0];
    EXPECT_EQ(r.kind, ElementKind::Resistor);
    EXPECT_EQ(r.name, "R1");
    EXPECT_EQ(r.nodes, (std::vector<std::string>{"1", "0"}));
    EXPECT_EQ(r.params.at("r"), 1000.0);
    EXPECT_TRUE(nl.variations.empty());
}

TEST(Parser, ResistorWithVariation) {
    const Netlist nl = parse_netlist("R1 1 0 1k variation=uniform(0.9k,1.1k)\nV1 1 0 dc 1\n");
    ASSERT_EQ(nl.variations.size(), 1u);
    const Variation& v = nl.variations[0];
    EXPECT_EQ(v.element, "R1");
    EXPECT_EQ(v.param, "r");
    EXPECT_TRUE(v.distribution == polychaos::Distribution::uniform(900.0, 1100.0));
    EXPECT_EQ(v.mode, VariationMode::Absolute);
}

TEST(Parser, MissingValueReportsToken4) {
    const std::string msg = error_of("R1 1 0\n");
    EXPECT_NE(msg.find("token 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("<input>:1:"), std::string::npos) << msg;
}

TEST(Parser, DuplicateNameDiagnostic) {
    ParseOptions opt;
    opt.filename = "dup.cir";
    const std::string msg = error_of("V1 1 0 dc 1\nR1 1 0 1k\nR1 1 0 2k\n", opt);
    EXPECT_EQ(msg.rfind("dup.cir:3:1:", 0), 0u) << msg;
    EXPECT_NE(msg.find("duplicate"), std::string::npos);
}

TEST(Parser, DanglingNodeDiagnostic) {
    const std::string msg = error_of("V1 1 0 dc 1\nR1 1 0 1k\nR2 1 2 1k\n");
    EXPECT_NE(msg.find("dangling node '2'"), std::string::npos) << msg;
    EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
}

TEST(Parser, ValueSuffixes) {
    EXPECT_EQ(parse_value("1k").value(), 1e3);
    EXPECT_EQ(parse_value("2.2MEG").value(), 2.2e6);
    EXPECT_EQ(parse_value("3u").value(), 3e-6);
    EXPECT_EQ(parse_value("1m").value(), 1e-3);
    EXPECT_FALSE(parse_value("1kx").has_value());
    EXPECT_FALSE(parse_value("abc").has_value());
}

TEST(Parser, ZetaNeedsSystemLevel) {
    const std::string text = "V1 1 0 dc 1\nR1 1 0 1k variation=zeta(1,0.1) mode=relative\n";
    EXPECT_FALSE(error_of(text).empty());
    ParseOptions opt;
    opt.allow_zeta = true;
    const Netlist nl = parse_netlist(text, opt);
    ASSERT_TRUE(nl.variations[0].zeta.has_value());
    EXPECT_EQ(nl.variations[0].zeta->index, 1);
    EXPECT_EQ(nl.variations[0].zeta->scale, 0.1);
}

TEST(Parser, SourceVariationRejected) {
    EXPECT_FALSE(error_of("V1 1 0 dc 1 variation=gauss(1,0.1)\nR1 1 0 1k\n").empty());
}

// Property: printing and re-parsing reproduces the netlist.
TEST(Printer, RoundTrip) {
    const std::string text =
        "VDD vdd 0 dc 3\n"
        "VIN in 0 pulse(0 1 1n 1n 1n 5n 20n)\n"
        "I1 0 b sin(0 1m 1k)\n"
        "R1 vdd a 10k variation=uniform(-0.05,0.05) mode=relative\n"
        "C1 a 0 1p\n"
        "L1 a b 1u\n"
        "RB b 0 1k\n"
        "D1 a 0 is=2e-14 variation=gauss(0,0.3) mode=exponential\n"
        "M1 a in 0 nmos kp=2e-4 vt=0.4 variation.vt=gauss(0.4,0.01)\n"
        ".tran 1n 100n\n";
    const Netlist nl = parse_netlist(text);
    const Netlist back = parse_netlist(print_netlist(nl));
    EXPECT_TRUE(back == nl);
    EXPECT_EQ(print_netlist(back), print_netlist(nl));
}

TEST(Elaborate, DividerNominal) {
    const auto dae = elaborate(parse_netlist("V1 in 0 dc 1\nR1 in out 1k\nR2 out 0 1k\n"));
    EXPECT_EQ(dae.d, 0u);
    EXPECT_NEAR(dc(dae, Vector())[dae.unknown_index("v(out)")], 0.5, 1e-12);
}

TEST(Elaborate, DividerAtSamplePoint) {
    const auto dae = elaborate(parse_netlist(
        "V1 in 0 dc 1\nR1 in out 1k\nR2 out 0 1k variation=uniform(-0.1,0.1) mode=relative\n"));
    ASSERT_EQ(dae.d, 1u);
    Vector xi(1);
    xi << 0.1;
    EXPECT_NEAR(dc(dae, xi)[dae.unknown_index("v(out)")], 1.1 / 2.1, 1e-12);
}

TEST(Elaborate, RcLowpassUnknowns) {
    const auto dae = elaborate(parse_netlist("V1 in 0 dc 1\nR1 in out 1k\nC1 out 0 1u\n"));
    EXPECT_EQ(dae.n, 3u);
    EXPECT_EQ(dae.unknown_names, (std::vector<std::string>{"v(in)", "v(out)", "i(V1)"}));
}

TEST(Elaborate, FloatingSubnetworkRejected) {
    const Netlist nl = parse_netlist("V1 1 0 dc 1\nR1 1 0 1k\nR2 a b 1k\nR3 a b 2k\n");
    EXPECT_THROW((void)elaborate(nl), InputError);
    const Netlist cap = parse_netlist("V1 1 0 dc 1\nR1 1 x 1k\nC1 x 0 1u\nC2 x 0 1u\nR2 1 0 1k\n");
    EXPECT_NO_THROW((void)elaborate(cap));
    const Netlist iso = parse_netlist("I1 0 x dc 1m\nC1 x 0 1u\nC2 x 0 1u\n");
    EXPECT_THROW((void)elaborate(iso), InputError);
}

// Property: random linear resistive networks agree with a hand-assembled
// nodal solve, and the solution satisfies KCL at every node.
TEST(Elaborate, LinearNetworksMatchNodalSolve) {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ur(100.0, 1e4);
    std::uniform_real_distribution<double> ui(-1e-3, 1e-3);
    for (int trial = 0; trial < 20; ++trial) {
        const int nodes = 3 + trial % 4;
        struct R {
            int a, b;
            double r;
        };
        std::vector<R> rs;
        for (int i = 1; i <= nodes; ++i) rs.push_back({i, i - 1, ur(rng)});  // chain to ground
        for (int i = 0; i < nodes; ++i) {
            const int a = 1 + static_cast<int>(rng() % nodes);
            const int b = static_cast<int>(rng() % (nodes + 1));
            if (a != b) rs.push_back({a, b, ur(rng)});
        }
        std::string text;
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(nodes, nodes);
        Eigen::VectorXd I = Eigen::VectorXd::Zero(nodes);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            const auto& r = rs[k];
            text += "R" + std::to_string(k) + " " + std::to_string(r.a) + " " + std::to_string(r.b) +
                    " " + std::to_string(r.r) + "\n";
            const double g = 1.0 / std::stod(std::to_string(r.r));
            G(r.a - 1, r.a - 1) += g;
            if (r.b > 0) {
                G(r.b - 1, r.b - 1) += g;
                G(r.a - 1, r.b - 1) -= g;
                G(r.b - 1, r.a - 1) -= g;
            }
        }
        for (int i = 1; i <= nodes; ++i) {
            const double cur = ui(rng);
            text += "I" + std::to_string(i) + " 0 " + std::to_string(i) + " dc " + std::to_string(cur) + "\n";
            I[i - 1] += std::stod(std::to_string(cur));  // current flows 0 -> node through the source
        }
        const auto dae = elaborate(parse_netlist(text));
        const Vector x = dc(dae, Vector());
        const Eigen::VectorXd ref = G.fullPivLu().solve(I);
        for (int i = 1; i <= nodes; ++i) {
            const double v = x[dae.unknown_index("v(" + std::to_string(i) + ")")];
            EXPECT_NEAR(v, ref[i - 1], 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff())) << text;
        }
        Eigen::VectorXd v(nodes);
        for (int i = 1; i <= nodes; ++i) v[i - 1] = x[dae.unknown_index("v(" + std::to_string(i) + ")")];
        EXPECT_LT((G * v - I).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Elaborate, ZetaSlotsAreShared) {
    ParseOptions opt;
    opt.allow_zeta = true;
    const Netlist nl = parse_netlist(
        "V1 in 0 dc 1\n"
        "R1 in out 1k variation=zeta(1,0.1) mode=relative\n"
        "R2 out 0 1k variation=zeta(1,0.2) mode=relative\n"
        "R3 out 0 5k variation=zeta(2) mode=relative\n",
        opt);
    const Elaboration e = elaborate_netlist(nl);
    ASSERT_EQ(e.dae.d, 2u);
    EXPECT_EQ(e.zeta[0], 1);
    EXPECT_EQ(e.zeta[1], 2);
    EXPECT_THROW((void)elaborate(nl), InputError);
    // zeta_1 = 1: R1 = 1.1k, R2 = 1.2k; zeta_2 = 0: R3 = 5k.
    Vector xi(2);
    xi << 1.0, 0.0;
    const double rp = 1.0 / (1.0 / 1.2e3 + 1.0 / 5e3);
    EXPECT_NEAR(dc(e.dae, xi)[e.dae.unknown_index("v(out)")], rp / (rp + 1.1e3), 1e-12);
}

TEST(Waveform, PulseAndBreakpoints) {
    const Netlist nl = parse_netlist("V1 1 0 pulse(0 1 1 1 1 2 0)\nR1 1 0 1k\n");
    const Waveform& w = nl.elements[0].source;
    EXPECT_EQ(w.eval(0.5), 0.0);
    EXPECT_NEAR(w.eval(1.5), 0.5, 1e-15);
    EXPECT_EQ(w.eval(3.0), 1.0);
    EXPECT_NEAR(w.eval(4.5), 0.5, 1e-15);
    EXPECT_EQ(w.eval(6.0), 0.0);
    EXPECT_EQ(w.breakpoints(10.0), (std::vector<double>{1, 2, 4, 5}));
}
