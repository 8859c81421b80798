#include "uqsim/netlist/printer.hpp"

#include "uqsim/common/io.hpp"

namespace uqsim::netlist {

namespace {

std::string waveform_text(const Waveform& w) {
    auto join = [&](const char* name) {
        std::string s = std::string(name) + "(";
        for (std::size_t i = 0; i < w.args.size(); ++i) {
            if (i) s += ' ';
            s += format_double(w.args[i]);
        }
        return s + ")";
    };
    switch (w.shape) {
        case Waveform::Shape::Dc: return "dc " + format_double(w.args[0]);
        case Waveform::Shape::Pulse: return join("pulse");
        case Waveform::Shape::Sin: return join("sin");
    }
    return "";
}

std::string distribution_text(const Variation& v) {
    if (v.zeta) {
        return "zeta(" + std::to_string(v.zeta->index) + "," + format_double(v.zeta->scale) + ")";
    }
    const auto& p = v.distribution.params();
    std::string s = std::string(polychaos::to_string(v.distribution.family())) + "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ',';
        s += format_double(p[i]);
    }
    return s + ")";
}

}  // namespace

std::string print_netlist(const Netlist& netlist) {
    std::string out;
    for (const auto& e : netlist.elements) {
        out += e.name;
        for (const auto& n : e.nodes) out += " " + n;
        const std::string primary =
            (e.kind == ElementKind::Resistor || e.kind == ElementKind::Capacitor ||
             e.kind == ElementKind::Inductor)
                ? primary_param(e.kind)
                : "";
        if (e.kind == ElementKind::VoltageSource || e.kind == ElementKind::CurrentSource) {
            out += " " + waveform_text(e.source);
        }
        if (e.kind == ElementKind::Mosfet) out += " " + e.model;
        if (!primary.empty()) out += " " + format_double(e.params.at(primary));
        for (const auto& [k, v] : e.params) {
            if (k == primary) continue;
            out += " " + k + "=" + format_double(v);
        }
        for (const auto& var : netlist.variations) {
            if (var.element != e.name) continue;
            out += " variation." + var.param + "=" + distribution_text(var);
            out += " mode." + var.param + "=" + to_string(var.mode);
        }
        out += '\n';
    }
    for (const auto& a : netlist.analyses) {
        switch (a.kind) {
            case Analysis::Kind::Op: out += ".op\n"; break;
            case Analysis::Kind::Dc: out += ".dc\n"; break;
            case Analysis::Kind::Tran:
                out += ".tran " + format_double(a.args[0]) + " " + format_double(a.args[1]) + "\n";
                break;
        }
    }
    out += ".end\n";
    return out;
}

}  // namespace uqsim::netlist
