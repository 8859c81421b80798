#pragma once

#include "uqsim/polychaos/distribution.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uqsim::netlist {

using polychaos::Distribution;

struct SourceLoc {
    int line = 0;
    int column = 0;
};

enum class ElementKind { Resistor, Capacitor, Inductor, VoltageSource, CurrentSource, Diode, Mosfet };

[[nodiscard]] char kind_letter(ElementKind kind) noexcept;

/// Independent-source waveform.
///   dc:    value
///   pulse: v1 v2 td tr tf pw per   (per = 0 means a single pulse)
///   sin:   vo va freq td
struct Waveform {
    enum class Shape { Dc, Pulse, Sin };
    Shape shape = Shape::Dc;
    std::vector<double> args{0.0};

    [[nodiscard]] double eval(double t) const;
    /// Corner times in [0, t_end].
    [[nodiscard]] std::vector<double> breakpoints(double t_end) const;
    [[nodiscard]] bool operator==(const Waveform&) const = default;
};

struct Element {
    ElementKind kind = ElementKind::Resistor;
    std::string name;
    std::vector<std::string> nodes;
    /// Numeric parameters by lowercase key. R/C/L keep their value under
    /// "r"/"c"/"l"; diodes use is, n, vt, cj; MOSFETs use kp, vt, lambda.
    std::map<std::string, double> params;
    /// MOSFET polarity ("nmos" or "pmos"); empty otherwise.
    std::string model;
    Waveform source;
    SourceLoc loc;

    [[nodiscard]] bool operator==(const Element& other) const {
        return kind == other.kind && name == other.name && nodes == other.nodes &&
               params == other.params && model == other.model && source == other.source;
    }
};

enum class VariationMode {
    Absolute,     ///< value = xi
    Relative,     ///< value = nominal * (1 + xi)
    Exponential,  ///< value = nominal * exp(xi)
};

[[nodiscard]] const char* to_string(VariationMode mode) noexcept;

/// Reference to a system-level intermediate variable. The parameter's random
/// input is scale * zeta_index.
struct ZetaRef {
    int index = 1;
    double scale = 1.0;
    [[nodiscard]] bool operator==(const ZetaRef&) const = default;
};

struct Variation {
    std::string element;
    std::string param;
    Distribution distribution = Distribution::gaussian(0.0, 1.0);
    VariationMode mode = VariationMode::Absolute;
    std::optional<ZetaRef> zeta;
    SourceLoc loc;

    [[nodiscard]] bool operator==(const Variation& other) const {
        return element == other.element && param == other.param &&
               distribution == other.distribution && mode == other.mode && zeta == other.zeta;
    }
};

struct Analysis {
    enum class Kind { Op, Dc, Tran };
    Kind kind = Kind::Op;
    std::vector<double> args;
    [[nodiscard]] bool operator==(const Analysis&) const = default;
};

struct Netlist {
    std::vector<Element> elements;
    std::vector<Variation> variations;
    std::vector<Analysis> analyses;

    [[nodiscard]] const Element* find(const std::string& name) const;
    [[nodiscard]] bool operator==(const Netlist&) const = default;
};

/// "0" and "gnd" (any case) denote the reference node.
[[nodiscard]] bool is_ground(const std::string& node) noexcept;

/// Key of the parameter a bare `variation=` refers to.
[[nodiscard]] std::string primary_param(ElementKind kind);

}  // namespace uqsim::netlist
