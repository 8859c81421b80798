#include "uqsim/netlist/parser.hpp"

#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <unordered_map>

namespace uqsim::netlist {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

struct Token {
    std::string text;
    SourceLoc loc;
};

/// One logical line (after joining '+' continuations).
struct Statement {
    std::vector<Token> tokens;
    SourceLoc loc;
    SourceLoc end;  // position just past the last character
};

class Diagnostics {
public:
    explicit Diagnostics(std::string filename) : filename_(std::move(filename)) {}
    [[noreturn]] void fail(SourceLoc loc, const std::string& message) const {
        throw InputError(filename_ + ":" + std::to_string(loc.line) + ":" +
                         std::to_string(loc.column) + ": " + message);
    }

private:
    std::string filename_;
};

// Splits a physical line into raw tokens. Parenthesized groups stay in one
// token; a group or '=' separated by blanks is glued back to its neighbour.
void tokenize_line(std::string_view line, int line_no, std::vector<Token>& out,
                   const Diagnostics& diag) {
    std::vector<Token> raw;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        int depth = 0;
        while (i < line.size()) {
            const char c = line[i];
            if (c == '(') {
                ++depth;
            } else if (c == ')') {
                if (depth == 0) diag.fail({line_no, static_cast<int>(i) + 1}, "unbalanced ')'");
                --depth;
            } else if (depth == 0 && std::isspace(static_cast<unsigned char>(c))) {
                break;
            }
            ++i;
        }
        if (depth != 0) diag.fail({line_no, static_cast<int>(start) + 1}, "unclosed '('");
        raw.push_back({std::string(line.substr(start, i - start)),
                       {line_no, static_cast<int>(start) + 1}});
    }
    for (auto& tok : raw) {
        if (!out.empty() && !out.back().text.empty() &&
            (out.back().text.back() == '=' || tok.text.front() == '=' ||
             tok.text.front() == '(')) {
            out.back().text += tok.text;
        } else {
            out.push_back(std::move(tok));
        }
    }
}

std::vector<Statement> split_statements(std::string_view text, const Diagnostics& diag) {
    std::vector<Statement> out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (const auto semi = line.find(';'); semi != std::string_view::npos) {
            line = line.substr(0, semi);
        }
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos) {
            if (eol == text.size()) break;
            continue;
        }
        if (line[first] == '*') {
            if (eol == text.size()) break;
            continue;
        }
        if (line[first] == '+') {
            if (out.empty()) diag.fail({line_no, static_cast<int>(first) + 1},
                                       "continuation line without a preceding statement");
            std::string padded(first + 1, ' ');
            padded += line.substr(first + 1);
            tokenize_line(padded, line_no, out.back().tokens, diag);
            out.back().end = {line_no, static_cast<int>(line.size()) + 1};
        } else {
            Statement st;
            st.loc = {line_no, static_cast<int>(first) + 1};
            tokenize_line(line, line_no, st.tokens, diag);
            st.end = {line_no, static_cast<int>(line.size()) + 1};
            out.push_back(std::move(st));
        }
        if (eol == text.size()) break;
    }
    return out;
}

// Splits "name(a, b c)" into name and argument strings.
bool split_call(std::string_view text, std::string& name, std::vector<std::string>& args) {
    const auto open = text.find('(');
    if (open == std::string_view::npos || text.back() != ')') return false;
    name = lower(text.substr(0, open));
    args.clear();
    std::string cur;
    for (char c : text.substr(open + 1, text.size() - open - 2)) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) args.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) args.push_back(std::move(cur));
    return true;
}

double require_value(std::string_view text) {
    const auto v = parse_value(text);
    if (!v) throw InputError("invalid number '" + std::string(text) + "'");
    return *v;
}

const std::map<std::string, double>& default_params(ElementKind kind) {
    static const std::map<std::string, double> diode{
        {"is", 1e-14}, {"n", 1.0}, {"vt", 0.025852}, {"cj", 0.0}};
    static const std::map<std::string, double> mos{{"kp", 1e-4}, {"vt", 0.5}, {"lambda", 0.0}};
    static const std::map<std::string, double> none;
    switch (kind) {
        case ElementKind::Diode: return diode;
        case ElementKind::Mosfet: return mos;
        default: return none;
    }
}

struct PendingMode {
    std::string param;  // empty: applies to all variations of the element
    VariationMode mode;
    SourceLoc loc;
};

class Parser {
public:
    Parser(std::string_view text, const ParseOptions& options)
        : text_(text), options_(options), diag_(options.filename) {}

    Netlist run() {
        for (auto& st : split_statements(text_, diag_)) {
            const std::string head = lower(st.tokens.front().text);
            if (head.front() == '.') {
                if (directive(st)) break;
            } else {
                element(st);
            }
        }
        check_connectivity();
        return std::move(netlist_);
    }

private:
    // Returns true on .end.
    bool directive(const Statement& st) {
        const std::string head = lower(st.tokens.front().text);
        auto numbers = [&](std::size_t from) {
            std::vector<double> v;
            for (std::size_t i = from; i < st.tokens.size(); ++i) {
                const auto x = parse_value(st.tokens[i].text);
                if (!x) diag_.fail(st.tokens[i].loc, "invalid number '" + st.tokens[i].text + "'");
                v.push_back(*x);
            }
            return v;
        };
        if (head == ".end") return true;
        if (head == ".op" || head == ".dc") {
            if (st.tokens.size() > 1) diag_.fail(st.tokens[1].loc, head + " takes no arguments");
            netlist_.analyses.push_back(
                {head == ".op" ? Analysis::Kind::Op : Analysis::Kind::Dc, {}});
            return false;
        }
        if (head == ".tran") {
            auto args = numbers(1);
            if (args.size() != 2) {
                diag_.fail(st.tokens.size() > 3 ? st.tokens[3].loc : st.end,
                           ".tran expects: .tran <tstep> <tstop>");
            }
            if (!(args[0] > 0.0) || !(args[1] > 0.0)) {
                diag_.fail(st.tokens[1].loc, ".tran step and stop time must be positive");
            }
            netlist_.analyses.push_back({Analysis::Kind::Tran, std::move(args)});
            return false;
        }
        diag_.fail(st.tokens.front().loc, "unknown directive '" + st.tokens.front().text + "'");
    }

    void element(const Statement& st) {
        const Token& name_tok = st.tokens.front();
        const std::string& name = name_tok.text;
        Element e;
        e.name = name;
        e.loc = name_tok.loc;
        for (char c : name) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') {
                diag_.fail(name_tok.loc, "invalid element name '" + name + "'");
            }
        }
        std::size_t node_count = 2;
        switch (std::toupper(static_cast<unsigned char>(name.front()))) {
            case 'R': e.kind = ElementKind::Resistor; break;
            case 'C': e.kind = ElementKind::Capacitor; break;
            case 'L': e.kind = ElementKind::Inductor; break;
            case 'V': e.kind = ElementKind::VoltageSource; break;
            case 'I': e.kind = ElementKind::CurrentSource; break;
            case 'D': e.kind = ElementKind::Diode; break;
            case 'M':
                e.kind = ElementKind::Mosfet;
                node_count = 3;
                break;
            default:
                diag_.fail(name_tok.loc, "unknown element kind '" + std::string(1, name.front()) + "'");
        }
        const std::string key = lower(name);
        if (auto it = first_seen_.find(key); it != first_seen_.end()) {
            diag_.fail(name_tok.loc, "duplicate element name '" + name + "' (first defined at line " +
                                         std::to_string(it->second) + ")");
        }
        first_seen_.emplace(key, name_tok.loc.line);

        std::size_t pos = 1;
        auto expect = [&](const char* what) -> const Token& {
            if (pos >= st.tokens.size()) {
                diag_.fail(st.end, std::string("expected ") + what + " (token " +
                                       std::to_string(pos + 1) + ")");
            }
            return st.tokens[pos++];
        };
        for (std::size_t k = 0; k < node_count; ++k) {
            const Token& t = expect("node name");
            if (t.text.find_first_of("=()") != std::string::npos) {
                diag_.fail(t.loc, "expected node name (token " + std::to_string(pos) + "), got '" +
                                      t.text + "'");
            }
            e.nodes.push_back(t.text);
            node_locs_[t.text].push_back(t.loc);
        }
        e.params = default_params(e.kind);

        switch (e.kind) {
            case ElementKind::Resistor:
            case ElementKind::Capacitor:
            case ElementKind::Inductor: {
                const Token& t = expect("value");
                const auto v = parse_value(t.text);
                if (!v) diag_.fail(t.loc, "invalid value '" + t.text + "'");
                if (e.kind == ElementKind::Resistor && *v == 0.0) {
                    diag_.fail(t.loc, "zero resistance");
                }
                e.params[primary_param(e.kind)] = *v;
                break;
            }
            case ElementKind::VoltageSource:
            case ElementKind::CurrentSource:
                e.source = source_spec(st, pos);
                break;
            case ElementKind::Mosfet: {
                const Token& t = expect("MOSFET polarity (nmos or pmos)");
                e.model = lower(t.text);
                if (e.model != "nmos" && e.model != "pmos") {
                    diag_.fail(t.loc, "expected nmos or pmos, got '" + t.text + "'");
                }
                break;
            }
            case ElementKind::Diode:
                break;
        }

        std::vector<PendingMode> modes;
        std::vector<Variation> local;
        for (; pos < st.tokens.size(); ++pos) {
            const Token& t = st.tokens[pos];
            const auto eq = t.text.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == t.text.size()) {
                diag_.fail(t.loc, "expected key=value (token " + std::to_string(pos + 1) +
                                      "), got '" + t.text + "'");
            }
            const std::string k = lower(t.text.substr(0, eq));
            const std::string value = t.text.substr(eq + 1);
            const SourceLoc vloc{t.loc.line, t.loc.column + static_cast<int>(eq) + 1};
            if (k == "variation" || k.rfind("variation.", 0) == 0) {
                local.push_back(variation(e, k, value, t.loc, vloc));
            } else if (k == "mode" || k.rfind("mode.", 0) == 0) {
                PendingMode pm;
                pm.param = k == "mode" ? "" : k.substr(5);
                pm.loc = t.loc;
                const std::string mv = lower(value);
                if (mv == "absolute") pm.mode = VariationMode::Absolute;
                else if (mv == "relative") pm.mode = VariationMode::Relative;
                else if (mv == "exponential") pm.mode = VariationMode::Exponential;
                else diag_.fail(vloc, "mode must be absolute, relative or exponential");
                modes.push_back(pm);
            } else {
                if (!e.params.count(k) || k == primary_value_key(e.kind)) {
                    diag_.fail(t.loc, "unknown parameter '" + k + "' for element " + e.name);
                }
                const auto v = parse_value(value);
                if (!v) diag_.fail(vloc, "invalid value '" + value + "'");
                e.params[k] = *v;
            }
        }
        for (const auto& pm : modes) {
            bool used = false;
            for (auto& var : local) {
                if (pm.param.empty() || pm.param == var.param) {
                    var.mode = pm.mode;
                    used = true;
                }
            }
            if (!used) diag_.fail(pm.loc, "mode given without a matching variation");
        }
        for (auto& var : local) netlist_.variations.push_back(std::move(var));
        netlist_.elements.push_back(std::move(e));
    }

    // For R/C/L the value is positional, not a key=value parameter.
    static std::string primary_value_key(ElementKind kind) {
        switch (kind) {
            case ElementKind::Resistor: return "r";
            case ElementKind::Capacitor: return "c";
            case ElementKind::Inductor: return "l";
            default: return "";
        }
    }

    Waveform source_spec(const Statement& st, std::size_t& pos) {
        if (pos >= st.tokens.size()) {
            diag_.fail(st.end, "expected source value (token " + std::to_string(pos + 1) + ")");
        }
        const Token& t = st.tokens[pos];
        Waveform w;
        if (lower(t.text) == "dc") {
            ++pos;
            if (pos >= st.tokens.size()) {
                diag_.fail(st.end, "expected dc value (token " + std::to_string(pos + 1) + ")");
            }
            const Token& v = st.tokens[pos++];
            const auto x = parse_value(v.text);
            if (!x) diag_.fail(v.loc, "invalid value '" + v.text + "'");
            w.args = {*x};
            return w;
        }
        std::string fname;
        std::vector<std::string> args;
        if (split_call(t.text, fname, args)) {
            ++pos;
            std::vector<double> vals;
            for (const auto& a : args) {
                const auto x = parse_value(a);
                if (!x) diag_.fail(t.loc, "invalid number '" + a + "' in " + fname + "(...)");
                vals.push_back(*x);
            }
            if (fname == "pulse") {
                if (vals.size() < 2 || vals.size() > 7) {
                    diag_.fail(t.loc, "pulse expects 2 to 7 arguments: v1 v2 [td tr tf pw per]");
                }
                vals.resize(7, 0.0);
                if (vals[3] < 0 || vals[4] < 0 || vals[5] < 0 || vals[6] < 0) {
                    diag_.fail(t.loc, "pulse times must be nonnegative");
                }
                if (vals[6] > 0 && vals[6] < vals[3] + vals[4] + vals[5]) {
                    diag_.fail(t.loc, "pulse period shorter than tr + pw + tf");
                }
                w.shape = Waveform::Shape::Pulse;
            } else if (fname == "sin") {
                if (vals.size() < 3 || vals.size() > 4) {
                    diag_.fail(t.loc, "sin expects 3 or 4 arguments: vo va freq [td]");
                }
                vals.resize(4, 0.0);
                w.shape = Waveform::Shape::Sin;
            } else {
                diag_.fail(t.loc, "unknown source function '" + fname + "'");
            }
            w.args = std::move(vals);
            return w;
        }
        const auto x = parse_value(t.text);
        if (!x) diag_.fail(t.loc, "invalid source value '" + t.text + "'");
        ++pos;
        w.args = {*x};
        return w;
    }

    Variation variation(const Element& e, const std::string& key, const std::string& value,
                        SourceLoc loc, SourceLoc vloc) {
        if (e.kind == ElementKind::VoltageSource || e.kind == ElementKind::CurrentSource) {
            diag_.fail(loc, "variations on independent sources are not supported");
        }
        Variation var;
        var.element = e.name;
        var.loc = loc;
        var.param = key == "variation" ? primary_param(e.kind) : key.substr(10);
        if (!e.params.count(var.param)) {
            diag_.fail(loc, "element " + e.name + " has no parameter '" + var.param + "'");
        }
        for (const auto& other : netlist_.variations) {
            if (other.element == e.name && other.param == var.param) {
                diag_.fail(loc, "duplicate variation on " + e.name + "." + var.param);
            }
        }
        std::string fname;
        std::vector<std::string> args;
        if (split_call(value, fname, args) && fname == "zeta") {
            if (!options_.allow_zeta) {
                diag_.fail(vloc, "zeta(...) variations are only allowed in system-level netlists");
            }
            if (args.empty() || args.size() > 2) diag_.fail(vloc, "zeta expects (index[, scale])");
            ZetaRef z;
            double idx = 0.0;
            try {
                idx = require_value(args[0]);
                if (args.size() == 2) z.scale = require_value(args[1]);
            } catch (const InputError& err) {
                diag_.fail(vloc, err.what());
            }
            if (idx < 1 || idx != std::floor(idx) || idx > 1e6) {
                diag_.fail(vloc, "zeta index must be a positive integer");
            }
            if (!(z.scale > 0.0)) diag_.fail(vloc, "zeta scale must be positive");
            z.index = static_cast<int>(idx);
            var.zeta = z;
            var.distribution = Distribution::gaussian(0.0, z.scale);
            return var;
        }
        try {
            var.distribution = parse_distribution(value);
        } catch (const InputError& err) {
            diag_.fail(vloc, err.what());
        }
        return var;
    }

    void check_connectivity() {
        bool ground = false;
        for (const auto& [node, locs] : node_locs_) {
            if (is_ground(node)) {
                ground = true;
                continue;
            }
            if (locs.size() < 2) {
                diag_.fail(locs.front(), "dangling node '" + node + "' (only one connection)");
            }
        }
        if (!netlist_.elements.empty() && !ground) {
            diag_.fail(netlist_.elements.front().loc, "netlist has no ground node '0'");
        }
        if (netlist_.elements.empty()) diag_.fail({1, 1}, "netlist has no elements");
    }

    std::string_view text_;
    const ParseOptions& options_;
    Diagnostics diag_;
    Netlist netlist_;
    std::unordered_map<std::string, int> first_seen_;
    std::map<std::string, std::vector<SourceLoc>> node_locs_;
};

}  // namespace

std::optional<double> parse_value(std::string_view text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') ++i;
    const std::size_t mant_start = i;
    bool digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, digits = true;
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, digits = true;
    }
    if (!digits) return std::nullopt;
    (void)mant_start;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            i = j;
        }
    }
    double value = 0.0;
    std::string num(text.substr(0, i));
    if (num.front() == '+') num.erase(0, 1);
    const auto res = std::from_chars(num.data(), num.data() + num.size(), value);
    if (res.ec != std::errc() || res.ptr != num.data() + num.size()) return std::nullopt;

    const std::string suffix = lower(text.substr(i));
    static const std::pair<const char*, double> scales[] = {
        {"", 1.0},     {"f", 1e-15}, {"p", 1e-12}, {"n", 1e-9}, {"u", 1e-6},
        {"m", 1e-3},   {"k", 1e3},   {"meg", 1e6}, {"g", 1e9}};
    for (const auto& [s, mult] : scales) {
        if (suffix == s) {
            const double out = value * mult;
            if (!std::isfinite(out)) return std::nullopt;
            return out;
        }
    }
    return std::nullopt;
}

Distribution parse_distribution(std::string_view text) {
    std::string fname;
    std::vector<std::string> args;
    if (!split_call(text, fname, args)) {
        throw InputError("expected a distribution such as uniform(lo,hi), got '" +
                         std::string(text) + "'");
    }
    std::vector<double> v;
    for (const auto& a : args) v.push_back(require_value(a));
    auto need = [&](std::size_t n) {
        if (v.size() != n) {
            throw InputError(fname + " expects " + std::to_string(n) + " argument(s), got " +
                             std::to_string(v.size()));
        }
    };
    if (fname == "uniform") {
        need(2);
        return Distribution::uniform(v[0], v[1]);
    }
    if (fname == "gauss" || fname == "normal" || fname == "gaussian") {
        need(2);
        return Distribution::gaussian(v[0], v[1]);
    }
    if (fname == "gamma") {
        need(1);
        return Distribution::gamma(v[0]);
    }
    if (fname == "beta") {
        need(2);
        return Distribution::beta(v[0], v[1]);
    }
    throw InputError("unknown distribution '" + fname + "'");
}

Netlist parse_netlist(std::string_view text, const ParseOptions& options) {
    return Parser(text, options).run();
}

Netlist parse_netlist_file(const std::filesystem::path& path, ParseOptions options) {
    if (options.filename == "<input>") options.filename = path.string();
    const std::string text = read_file(path);
    return parse_netlist(text, options);
}

}  // namespace uqsim::netlist
