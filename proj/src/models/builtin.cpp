#include "uqsim/models/builtin.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"
#include "uqsim/netlist/mna.hpp"
#include "uqsim/netlist/parser.hpp"

#include <algorithm>

namespace uqsim::models {

namespace {

BuiltinParams merge(const std::string& model, BuiltinParams defaults, const BuiltinParams& given) {
    for (const auto& [k, v] : given) {
        auto it = defaults.find(k);
        if (it == defaults.end()) {
            throw InputError("builtin model '" + model + "' has no parameter '" + k + "'");
        }
        it->second = v;
    }
    return defaults;
}

std::string num(double v) { return format_double(v); }

std::string rel_uniform(double tol) {
    return "variation=uniform(" + num(-tol) + "," + num(tol) + ") mode=relative";
}

}  // namespace

std::string canonical_builtin_name(std::string_view name) {
    std::string out(name);
    if (out.rfind("builtin:", 0) == 0) out.erase(0, 8);
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

std::vector<std::string> builtin_names() {
    return {"divider", "rc_lowpass", "diode_rectifier", "plate_actuator", "opamp_like"};
}

std::string builtin_netlist(std::string_view raw, const BuiltinParams& given) {
    const std::string name = canonical_builtin_name(raw);
    if (name == "divider") {
        const auto p = merge(name, {{"r1", 1e3}, {"r2", 1e3}, {"tol", 0.1}}, given);
        return "V1 in 0 dc 1\n"
               "R1 in out " + num(p.at("r1")) + "\n"
               "R2 out 0 " + num(p.at("r2")) + " " + rel_uniform(p.at("tol")) + "\n"
               ".op\n";
    }
    if (name == "rc_lowpass") {
        const auto p = merge(name, {{"r", 1e3}, {"c", 1e-6}, {"tol", 0.1}, {"step", 0.0}}, given);
        const std::string src = p.at("step") != 0.0 ? "pulse(0 1 0 0 0 1e30 0)" : "dc 1";
        const double tau = p.at("r") * p.at("c");
        return "V1 in 0 " + src + "\n"
               "R1 in out " + num(p.at("r")) + " " + rel_uniform(p.at("tol")) + "\n"
               "C1 out 0 " + num(p.at("c")) + "\n"
               ".tran " + num(tau / 100.0) + " " + num(5.0 * tau) + "\n";
    }
    if (name == "diode_rectifier") {
        const auto p = merge(name, {{"r", 1e3}, {"is", 1e-14}, {"tol", 0.1}, {"is_sigma", 0.5}},
                             given);
        return "V1 in 0 dc 1\n"
               "R1 in out " + num(p.at("r")) + " " + rel_uniform(p.at("tol")) + "\n"
               "D1 out 0 is=" + num(p.at("is")) + " variation=gauss(0," + num(p.at("is_sigma")) +
               ") mode=exponential\n"
               ".op\n";
    }
    if (name == "opamp_like") {
        const auto p = merge(name, {{"vdd", 3.0}, {"vcm", 1.5}, {"kp", 4e-4}, {"vt", 0.5},
                                    {"vt_sigma", 0.02}, {"tol", 0.05}, {"rd", 1e4},
                                    {"rl", 2e4}, {"rt", 1465.0}},
                             given);
        const std::string vt = "variation.vt=gauss(" + num(p.at("vt")) + "," +
                               num(p.at("vt_sigma")) + ") mode.vt=absolute";
        const std::string kp = "variation.kp=uniform(" + num(-p.at("tol")) + "," +
                               num(p.at("tol")) + ") mode.kp=relative";
        const std::string kpv = "kp=" + num(p.at("kp")) + " vt=" + num(p.at("vt"));
        return "VDD vdd 0 dc " + num(p.at("vdd")) + "\n"
               "VINP inp 0 dc " + num(p.at("vcm")) + "\n"
               "VINN inn 0 dc " + num(p.at("vcm")) + "\n"
               "RT tail 0 " + num(p.at("rt")) + " " + rel_uniform(p.at("tol")) + "\n"
               "M1 o1 inp tail nmos " + kpv + " " + vt + " " + kp + "\n"
               "M2 o2 inn tail nmos " + kpv + " " + vt + " " + kp + "\n"
               "RD1 vdd o1 " + num(p.at("rd")) + " " + rel_uniform(p.at("tol")) + "\n"
               "RD2 vdd o2 " + num(p.at("rd")) + " " + rel_uniform(p.at("tol")) + "\n"
               "M3 out o2 vdd pmos " + kpv + " " + vt + " " + kp + "\n"
               "RL out 0 " + num(p.at("rl")) + " " + rel_uniform(p.at("tol")) + "\n"
               "CL out 0 1p\n"
               ".op\n";
    }
    if (name == "plate_actuator") return "";
    throw InputError("unknown builtin model '" + std::string(raw) + "'");
}

SecondOrderModel plate_actuator_model(const BuiltinParams& given) {
    const auto p = merge("plate_actuator",
                         {{"m", 1.0}, {"c", 0.5}, {"k", 1.0}, {"gap", 1.0}, {"alpha", 1.0},
                          {"voltage", 0.3}, {"gap_rel", 0.05}, {"k_rel", 0.05}},
                         given);
    const double mass = p.at("m"), damp = p.at("c"), k0 = p.at("k"), g0 = p.at("gap"),
                 alpha = p.at("alpha"), volts = p.at("voltage"), gap_rel = p.at("gap_rel"),
                 k_rel = p.at("k_rel");
    SecondOrderModel m;
    m.name = "plate_actuator";
    m.n = 1;
    m.m = 1;
    m.distributions = {Distribution::gaussian(0.0, 1.0), Distribution::gaussian(0.0, 1.0)};
    m.conservative = true;
    m.M = [mass](const Vector&, const Vector&) { return Matrix::Constant(1, 1, mass); };
    m.D = [damp](const Vector&, const Vector&) { return Matrix::Constant(1, 1, damp); };
    m.force = [=](const Vector& z, const Vector& u, const Vector& xi) {
        const double gap = g0 * (1.0 + gap_rel * xi[0]);
        const double k = k0 * (1.0 + k_rel * xi[1]);
        const double opening = gap - z[0];
        if (!(opening > 0.0)) {
            throw NumericError("plate actuator gap closed (pull-in) at z = " + std::to_string(z[0]));
        }
        Vector f(1);
        f[0] = k * z[0] - alpha * u[0] * u[0] / (opening * opening);
        return f;
    };
    m.input = [volts](double t) { return Vector::Constant(1, t > 0.0 ? volts : 0.0); };
    m.breakpoints = [](double) { return std::vector<double>{0.0}; };
    m.coordinate_names = {"z"};
    return m;
}

BuiltinModel builtin_model(std::string_view raw, const BuiltinParams& params) {
    const std::string name = canonical_builtin_name(raw);
    BuiltinModel out;
    if (name == "plate_actuator") {
        out.dae = second_order_to_first(plate_actuator_model(params));
        out.dae.parameter_names = {"gap", "k"};
        out.output = "z";
        return out;
    }
    const std::string text = builtin_netlist(name, params);
    netlist::ParseOptions opts;
    opts.filename = "builtin:" + name;
    out.dae = netlist::elaborate(netlist::parse_netlist(text, opts));
    out.dae.name = name;
    out.output = name == "diode_rectifier" || name == "divider" || name == "rc_lowpass" ||
                         name == "opamp_like"
                     ? "v(out)"
                     : out.dae.unknown_names.front();
    return out;
}

}  // namespace uqsim::models
