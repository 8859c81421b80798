#include "uqsim/netlist/netlist.hpp"

#include "uqsim/common/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace uqsim::netlist {

char kind_letter(ElementKind kind) noexcept {
    switch (kind) {
        case ElementKind::Resistor: return 'R';
        case ElementKind::Capacitor: return 'C';
        case ElementKind::Inductor: return 'L';
        case ElementKind::VoltageSource: return 'V';
        case ElementKind::CurrentSource: return 'I';
        case ElementKind::Diode: return 'D';
        case ElementKind::Mosfet: return 'M';
    }
    return '?';
}

const char* to_string(VariationMode mode) noexcept {
    switch (mode) {
        case VariationMode::Absolute: return "absolute";
        case VariationMode::Relative: return "relative";
        case VariationMode::Exponential: return "exponential";
    }
    return "?";
}

double Waveform::eval(double t) const {
    switch (shape) {
        case Shape::Dc:
            return args[0];
        case Shape::Pulse: {
            const double v1 = args[0], v2 = args[1], td = args[2], tr = args[3], tf = args[4],
                         pw = args[5], per = args[6];
            if (t <= td) return v1;
            double tt = t - td;
            if (per > 0.0) {
                tt = std::fmod(tt, per);
                // The end of one period is the start of the next: value v1.
                if (tt == 0.0) return v1;
            }
            if (tt < tr) return v1 + (v2 - v1) * tt / tr;
            if (tt <= tr + pw) return v2;
            if (tt < tr + pw + tf) return v2 + (v1 - v2) * (tt - tr - pw) / tf;
            return v1;
        }
        case Shape::Sin: {
            const double vo = args[0], va = args[1], freq = args[2], td = args[3];
            if (t <= td) return vo;
            return vo + va * std::sin(2.0 * M_PI * freq * (t - td));
        }
    }
    return 0.0;
}

std::vector<double> Waveform::breakpoints(double t_end) const {
    std::vector<double> out;
    switch (shape) {
        case Shape::Dc:
            break;
        case Shape::Pulse: {
            const double td = args[2], tr = args[3], tf = args[4], pw = args[5], per = args[6];
            const double corners[] = {0.0, tr, tr + pw, tr + pw + tf};
            for (long k = 0;; ++k) {
                const double base = td + static_cast<double>(k) * per;
                if (base > t_end) break;
                for (double c : corners) {
                    if (base + c <= t_end) out.push_back(base + c);
                }
                if (!(per > 0.0)) break;
                if (k > 1000000) throw InputError("pulse period too short for the time span");
            }
            break;
        }
        case Shape::Sin:
            if (args[3] <= t_end) out.push_back(args[3]);
            break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

const Element* Netlist::find(const std::string& name) const {
    for (const auto& e : elements) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

bool is_ground(const std::string& node) noexcept {
    if (node == "0") return true;
    if (node.size() != 3) return false;
    std::string lower;
    for (char c : node) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return lower == "gnd";
}

std::string primary_param(ElementKind kind) {
    switch (kind) {
        case ElementKind::Resistor: return "r";
        case ElementKind::Capacitor: return "c";
        case ElementKind::Inductor: return "l";
        case ElementKind::Diode: return "is";
        case ElementKind::Mosfet: return "vt";
        case ElementKind::VoltageSource:
        case ElementKind::CurrentSource: break;
    }
    throw InputError(std::string("element kind ") + kind_letter(kind) + " has no variable parameter");
}

}  // namespace uqsim::netlist
