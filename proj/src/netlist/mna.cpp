#include "uqsim/netlist/mna.hpp"

#include "uqsim/common/error.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numeric>

namespace uqsim::netlist {

namespace {

struct Param {
    double nominal = 0.0;
    int slot = -1;
    double scale = 1.0;
    VariationMode mode = VariationMode::Absolute;

    [[nodiscard]] double value(const Vector& xi) const {
        if (slot < 0) return nominal;
        const double e = scale * xi[slot];
        switch (mode) {
            case VariationMode::Absolute: return e;
            case VariationMode::Relative: return nominal * (1.0 + e);
            case VariationMode::Exponential: return nominal * std::exp(e);
        }
        return nominal;
    }
};

struct Compiled {
    ElementKind kind;
    std::string name;
    int a = -1, b = -1, c = -1;  // node unknowns; -1 is ground. MOSFET: d, g, s.
    int branch = -1;
    int input = -1;
    bool pmos = false;
    std::map<std::string, Param> params;

    [[nodiscard]] double p(const std::string& key, const Vector& xi) const {
        return params.at(key).value(xi);
    }
};

struct Circuit {
    std::vector<Compiled> elements;
    Eigen::Index n = 0;
    double gmin = 0.0;
};

double volt(const Vector& x, int node) { return node < 0 ? 0.0 : x[node]; }

// Adds value at (row, col) unless either index is ground.
void add(Matrix* m, int row, int col, double v) {
    if (m && row >= 0 && col >= 0) (*m)(row, col) += v;
}
void add(Vector* r, int row, double v) {
    if (r && row >= 0) (*r)[row] += v;
}

struct MosEval {
    double i = 0.0;   // current into the drain terminal
    double dd = 0.0;  // dI/dvd
    double dg = 0.0;  // dI/dvg
    double ds = 0.0;  // dI/dvs
};

// Channel current for vds >= 0 with gm = dI/dvgs and gds = dI/dvds.
void square_law(double kp, double vt, double lambda, double vgs, double vds, double& id,
                double& gm, double& gds) {
    const double vov = vgs - vt;
    if (vov <= 0.0) {
        id = gm = gds = 0.0;
        return;
    }
    const double clm = 1.0 + lambda * vds;
    if (vds < vov) {
        const double core = vov * vds - 0.5 * vds * vds;
        id = kp * core * clm;
        gm = kp * vds * clm;
        gds = kp * (vov - vds) * clm + kp * core * lambda;
    } else {
        id = 0.5 * kp * vov * vov * clm;
        gm = kp * vov * clm;
        gds = 0.5 * kp * vov * vov * lambda;
    }
}

MosEval nmos_current(double kp, double vt, double lambda, double vd, double vg, double vs) {
    MosEval out;
    double id, gm, gds;
    if (vd >= vs) {
        square_law(kp, vt, lambda, vg - vs, vd - vs, id, gm, gds);
        out.i = id;
        out.dd = gds;
        out.dg = gm;
        out.ds = -gm - gds;
    } else {
        square_law(kp, vt, lambda, vg - vd, vs - vd, id, gm, gds);
        out.i = -id;
        out.dd = gm + gds;
        out.dg = -gm;
        out.ds = -gds;
    }
    return out;
}

void stamp(const Circuit& c, const Vector& x, const Vector& xi, Vector* q, Vector* f, Matrix* dq,
           Matrix* df) {
    const double gmin = c.gmin;
    for (const auto& e : c.elements) {
        switch (e.kind) {
            case ElementKind::Resistor: {
                const double r = e.p("r", xi);
                if (r == 0.0 || !std::isfinite(r)) {
                    throw NumericError("resistance of " + e.name + " is " + std::to_string(r));
                }
                const double g = 1.0 / r;
                const double i = g * (volt(x, e.a) - volt(x, e.b));
                add(f, e.a, i);
                add(f, e.b, -i);
                add(df, e.a, e.a, g);
                add(df, e.a, e.b, -g);
                add(df, e.b, e.a, -g);
                add(df, e.b, e.b, g);
                break;
            }
            case ElementKind::Capacitor: {
                const double cap = e.p("c", xi);
                const double qc = cap * (volt(x, e.a) - volt(x, e.b));
                add(q, e.a, qc);
                add(q, e.b, -qc);
                add(dq, e.a, e.a, cap);
                add(dq, e.a, e.b, -cap);
                add(dq, e.b, e.a, -cap);
                add(dq, e.b, e.b, cap);
                break;
            }
            case ElementKind::Inductor: {
                const double ind = e.p("l", xi);
                const double il = x[e.branch];
                add(f, e.a, il);
                add(f, e.b, -il);
                add(df, e.a, e.branch, 1.0);
                add(df, e.b, e.branch, -1.0);
                add(q, e.branch, ind * il);
                add(dq, e.branch, e.branch, ind);
                add(f, e.branch, -(volt(x, e.a) - volt(x, e.b)));
                add(df, e.branch, e.a, -1.0);
                add(df, e.branch, e.b, 1.0);
                break;
            }
            case ElementKind::VoltageSource: {
                const double iv = x[e.branch];
                add(f, e.a, iv);
                add(f, e.b, -iv);
                add(df, e.a, e.branch, 1.0);
                add(df, e.b, e.branch, -1.0);
                add(f, e.branch, volt(x, e.a) - volt(x, e.b));
                add(df, e.branch, e.a, 1.0);
                add(df, e.branch, e.b, -1.0);
                break;
            }
            case ElementKind::CurrentSource:
                break;  // enters through B
            case ElementKind::Diode: {
                const double is = e.p("is", xi);
                const double nvt = e.p("n", xi) * e.p("vt", xi);
                const double cj = e.p("cj", xi);
                const double v = volt(x, e.a) - volt(x, e.b);
                const double vcrit = 40.0 * nvt;
                double id, g;
                if (v <= vcrit) {
                    const double ex = std::exp(v / nvt);
                    id = is * (ex - 1.0);
                    g = is * ex / nvt;
                } else {
                    const double ex = std::exp(40.0);
                    id = is * (ex * (1.0 + (v - vcrit) / nvt) - 1.0);
                    g = is * ex / nvt;
                }
                id += gmin * v;
                g += gmin;
                add(f, e.a, id);
                add(f, e.b, -id);
                add(df, e.a, e.a, g);
                add(df, e.a, e.b, -g);
                add(df, e.b, e.a, -g);
                add(df, e.b, e.b, g);
                if (cj != 0.0) {
                    add(q, e.a, cj * v);
                    add(q, e.b, -cj * v);
                    add(dq, e.a, e.a, cj);
                    add(dq, e.a, e.b, -cj);
                    add(dq, e.b, e.a, -cj);
                    add(dq, e.b, e.b, cj);
                }
                break;
            }
            case ElementKind::Mosfet: {
                const double kp = e.p("kp", xi);
                const double vt = e.p("vt", xi);
                const double lambda = e.p("lambda", xi);
                const double vd = volt(x, e.a), vg = volt(x, e.b), vs = volt(x, e.c);
                MosEval m = e.pmos ? nmos_current(kp, vt, lambda, -vd, -vg, -vs)
                                   : nmos_current(kp, vt, lambda, vd, vg, vs);
                if (e.pmos) m.i = -m.i;  // derivatives keep their sign under v -> -v, I -> -I
                m.i += gmin * (vd - vs);
                m.dd += gmin;
                m.ds -= gmin;
                add(f, e.a, m.i);
                add(f, e.c, -m.i);
                add(df, e.a, e.a, m.dd);
                add(df, e.a, e.b, m.dg);
                add(df, e.a, e.c, m.ds);
                add(df, e.c, e.a, -m.dd);
                add(df, e.c, e.b, -m.dg);
                add(df, e.c, e.c, -m.ds);
                break;
            }
        }
    }
}

int find_root(std::vector<int>& parent, int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
}

}  // namespace

Elaboration elaborate_netlist(const Netlist& netlist, const MnaOptions& options) {
    auto circuit = std::make_shared<Circuit>();
    circuit->gmin = options.gmin;

    std::map<std::string, int> node_index;
    std::vector<std::string> unknown_names;
    auto node = [&](const std::string& name) -> int {
        if (is_ground(name)) return -1;
        auto [it, inserted] = node_index.emplace(name, static_cast<int>(node_index.size()));
        if (inserted) unknown_names.push_back("v(" + name + ")");
        return it->second;
    };
    for (const auto& e : netlist.elements) {
        for (const auto& n : e.nodes) node(n);
    }
    const int nodes = static_cast<int>(node_index.size());
    int next = nodes;
    for (const auto& e : netlist.elements) {
        if (e.kind == ElementKind::VoltageSource) unknown_names.push_back("i(" + e.name + ")");
    }
    for (const auto& e : netlist.elements) {
        if (e.kind == ElementKind::Inductor) unknown_names.push_back("i(" + e.name + ")");
    }

    // DC-connectivity check before anything is solved.
    std::vector<int> parent(static_cast<std::size_t>(nodes) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto slot_of = [&](const std::string& n) { return is_ground(n) ? nodes : node_index.at(n); };
    auto unite = [&](const std::string& u, const std::string& v) {
        parent[find_root(parent, slot_of(u))] = find_root(parent, slot_of(v));
    };
    for (const auto& e : netlist.elements) {
        switch (e.kind) {
            case ElementKind::Resistor:
            case ElementKind::Inductor:
            case ElementKind::VoltageSource:
            case ElementKind::Diode:
                unite(e.nodes[0], e.nodes[1]);
                break;
            case ElementKind::Mosfet:
                unite(e.nodes[0], e.nodes[2]);
                break;
            default:
                break;
        }
    }
    std::string floating;
    for (const auto& [name, idx] : node_index) {
        if (find_root(parent, idx) != find_root(parent, nodes)) floating += " " + name;
    }
    if (!floating.empty()) {
        throw InputError("floating subnetwork: no DC path to ground from node(s)" + floating);
    }

    Elaboration out;
    models::StochasticDae& dae = out.dae;
    std::map<int, int> zeta_slot;
    std::map<std::pair<std::string, std::string>, Param> varied;
    int slots = 0;
    for (const auto& v : netlist.variations) {
        const Element* e = netlist.find(v.element);
        if (!e || !e->params.count(v.param)) {
            throw InputError("variation references unknown parameter " + v.element + "." + v.param);
        }
        Param p;
        p.nominal = e->params.at(v.param);
        p.mode = v.mode;
        if (v.zeta) {
            auto [it, inserted] = zeta_slot.emplace(v.zeta->index, slots);
            if (inserted) {
                ++slots;
                dae.distributions.push_back(Distribution::gaussian(0.0, 1.0));
                dae.parameter_names.push_back("zeta" + std::to_string(v.zeta->index));
                out.zeta.emplace_back(v.zeta->index);
            }
            p.slot = it->second;
            p.scale = v.zeta->scale;
        } else {
            p.slot = slots++;
            dae.distributions.push_back(v.distribution);
            dae.parameter_names.push_back(v.element + "." + v.param);
            out.zeta.emplace_back(std::nullopt);
        }
        varied[{v.element, v.param}] = p;
    }

    int vsource = 0;
    int inductor = 0;
    int inputs = 0;
    int vsources_total = 0;
    for (const auto& e : netlist.elements) vsources_total += e.kind == ElementKind::VoltageSource;
    std::vector<Waveform> waveforms;
    for (const auto& e : netlist.elements) {
        Compiled c;
        c.kind = e.kind;
        c.name = e.name;
        c.a = node(e.nodes[0]);
        c.b = node(e.nodes[1]);
        if (e.nodes.size() > 2) c.c = node(e.nodes[2]);
        c.pmos = e.model == "pmos";
        for (const auto& [k, val] : e.params) {
            auto it = varied.find({e.name, k});
            if (it != varied.end()) {
                c.params[k] = it->second;
            } else {
                Param p;
                p.nominal = val;
                c.params[k] = p;
            }
        }
        if (e.kind == ElementKind::VoltageSource) c.branch = next + vsource++;
        if (e.kind == ElementKind::Inductor) c.branch = next + vsources_total + inductor++;
        if (e.kind == ElementKind::VoltageSource || e.kind == ElementKind::CurrentSource) {
            c.input = inputs++;
            waveforms.push_back(e.source);
        }
        circuit->elements.push_back(std::move(c));
    }
    circuit->n = static_cast<Eigen::Index>(unknown_names.size());
    const Eigen::Index n = circuit->n;

    dae.name = "netlist";
    dae.n = static_cast<std::size_t>(n);
    dae.d = static_cast<std::size_t>(slots);
    dae.m = static_cast<std::size_t>(inputs);
    dae.unknown_names = std::move(unknown_names);
    dae.B = Matrix::Zero(n, inputs);
    for (const auto& c : circuit->elements) {
        if (c.kind == ElementKind::VoltageSource) dae.B(c.branch, c.input) = 1.0;
        if (c.kind == ElementKind::CurrentSource) {
            if (c.a >= 0) dae.B(c.a, c.input) -= 1.0;
            if (c.b >= 0) dae.B(c.b, c.input) += 1.0;
        }
    }
    auto wf = std::make_shared<const std::vector<Waveform>>(std::move(waveforms));
    dae.input = [wf](double t) {
        Vector u(static_cast<Eigen::Index>(wf->size()));
        for (std::size_t i = 0; i < wf->size(); ++i) u[static_cast<Eigen::Index>(i)] = (*wf)[i].eval(t);
        return u;
    };
    dae.breakpoints = [wf](double t_end) {
        std::vector<double> out;
        for (const auto& w : *wf) {
            const auto b = w.breakpoints(t_end);
            out.insert(out.end(), b.begin(), b.end());
        }
        return out;
    };
    std::shared_ptr<const Circuit> cc = circuit;
    dae.q = [cc](const Vector& x, const Vector& xi) {
        Vector q = Vector::Zero(cc->n);
        stamp(*cc, x, xi, &q, nullptr, nullptr, nullptr);
        return q;
    };
    dae.f = [cc](const Vector& x, const Vector& xi) {
        Vector f = Vector::Zero(cc->n);
        stamp(*cc, x, xi, nullptr, &f, nullptr, nullptr);
        return f;
    };
    dae.dq = [cc](const Vector& x, const Vector& xi) {
        Matrix j = Matrix::Zero(cc->n, cc->n);
        stamp(*cc, x, xi, nullptr, nullptr, &j, nullptr);
        return j;
    };
    dae.df = [cc](const Vector& x, const Vector& xi) {
        Matrix j = Matrix::Zero(cc->n, cc->n);
        stamp(*cc, x, xi, nullptr, nullptr, nullptr, &j);
        return j;
    };
    dae.validate();
    return out;
}

models::StochasticDae elaborate(const Netlist& netlist, const MnaOptions& options) {
    Elaboration e = elaborate_netlist(netlist, options);
    for (const auto& z : e.zeta) {
        if (z) throw InputError("zeta variations need the hierarchical propagation flow");
    }
    return std::move(e.dae);
}

}  // namespace uqsim::netlist
