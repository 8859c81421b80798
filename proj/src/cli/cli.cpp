#include "uqsim/cli/cli.hpp"

#include "uqsim/anova/anova.hpp"
#include "uqsim/anova/report.hpp"
#include "uqsim/common/error.hpp"
#include "uqsim/common/io.hpp"
#include "uqsim/common/parallel.hpp"
#include "uqsim/hier/density.hpp"
#include "uqsim/hier/propagate.hpp"
#include "uqsim/hier/surrogate.hpp"
#include "uqsim/models/builtin.hpp"
#include "uqsim/montecarlo/montecarlo.hpp"
#include "uqsim/netlist/mna.hpp"
#include "uqsim/netlist/parser.hpp"
#include "uqsim/polychaos/gpc_json.hpp"
#include "uqsim/stsolver/dc.hpp"
#include "uqsim/stsolver/export.hpp"
#include "uqsim/stsolver/transient.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace uqsim::cli {

namespace {

namespace fs = std::filesystem;

struct Common {
    std::string netlist;
    std::string model;
    std::vector<std::string> params;
    int order = 2;
    std::string out_dir = ".";
    unsigned threads = 0;
    std::string output;
    double residual_tol = 1e-9;
    int max_iterations = 50;
    double condition_cap = 1e8;
};

struct TransientArgs {
    double tstop = 0.0;
    double tstep = 0.0;
    double tol = 1e-6;
    double fixed_step = 0.0;
    bool json = false;
};

struct McArgs {
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::size_t bins = 50;
    double time = 0.0;
};

struct AnovaArgs {
    std::size_t m = 2;
    double sigma = 0.0;
    std::vector<double> anchor;
};

struct HierArgs {
    std::vector<std::string> surrogates;
    std::string route = "auto";
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
    std::string analysis = "dc";
    std::string surrogate_out;
};

struct Loaded {
    models::StochasticDae dae;
    std::string output;
    std::optional<netlist::Netlist> source;
    std::optional<netlist::Elaboration> elaboration;
};

// Everything an analysis produced, written only after it succeeded.
struct Artifacts {
    std::vector<std::pair<fs::path, std::string>> files;
    std::ostringstream summary;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--netlist", c.netlist, "Circuit netlist file");
    sub->add_option("--model", c.model, "Builtin model, e.g. builtin:diode-rectifier");
    sub->add_option("--param", c.params, "Builtin model parameter key=value (repeatable)");
    sub->add_option("--order", c.order, "Total gPC order p")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", c.out_dir, "Output directory");
    sub->add_option("--threads", c.threads, "Worker threads (0 = all cores)");
    sub->add_option("--output", c.output, "Reported unknown, e.g. v(out)");
    sub->add_option("--residual-tol", c.residual_tol, "Newton residual tolerance per unknown");
    sub->add_option("--max-iterations", c.max_iterations, "Newton iteration limit");
    sub->add_option("--condition-cap", c.condition_cap, "Testing-point condition number cap");
}

models::BuiltinParams parse_params(const std::vector<std::string>& items) {
    models::BuiltinParams out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw InputError("--param expects key=value, got '" + item + "'");
        }
        const auto v = netlist::parse_value(item.substr(eq + 1));
        if (!v) throw InputError("--param " + item.substr(0, eq) + ": not a number");
        out[item.substr(0, eq)] = *v;
    }
    return out;
}

Loaded load(const Common& c, bool allow_zeta) {
    if (c.netlist.empty() == c.model.empty()) {
        throw InputError("specify exactly one of --netlist or --model");
    }
    Loaded out;
    if (!c.model.empty()) {
        models::BuiltinModel b = models::builtin_model(c.model, parse_params(c.params));
        out.dae = std::move(b.dae);
        out.output = b.output;
    } else {
        if (!c.params.empty()) throw InputError("--param applies to builtin models only");
        netlist::ParseOptions opts;
        opts.filename = c.netlist;
        opts.allow_zeta = allow_zeta;
        out.source = netlist::parse_netlist_file(c.netlist, opts);
        out.elaboration = netlist::elaborate_netlist(*out.source);
        out.dae = out.elaboration->dae;
        const auto& names = out.dae.unknown_names;
        out.output = std::find(names.begin(), names.end(), "v(out)") != names.end() ? "v(out)"
                                                                                     : names.front();
    }
    if (!c.output.empty()) out.output = c.output;
    (void)out.dae.unknown_index(out.output);
    return out;
}

stsolver::NewtonOptions newton_options(const Common& c) {
    stsolver::NewtonOptions n;
    n.residual_tol = c.residual_tol;
    n.max_iterations = c.max_iterations;
    return n;
}

stsolver::SelectionOptions selection_options(const Common& c) {
    stsolver::SelectionOptions s;
    s.condition_cap = c.condition_cap;
    return s;
}

stsolver::DcOptions dc_options(const Common& c) {
    stsolver::DcOptions o;
    o.newton = newton_options(c);
    o.threads = c.threads;
    return o;
}

fs::path out_path(const Common& c, const std::string& name) { return fs::path(c.out_dir) / name; }

void describe_space(std::ostream& s, const stsolver::SpectralSpace& space) {
    s << "parameters: " << space.dimension() << ", order: " << space.index_set.order()
      << ", testing points: " << space.size() << " (of " << space.tps.candidates
      << " candidates), condition: " << format_double(space.tps.condition) << "\n";
}

void summarize_expansion(std::ostream& s, const polychaos::GpcExpansion& e,
                         const std::vector<std::string>& names) {
    const Vector mean = e.mean();
    const Vector sd = e.stddev();
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        s << "  " << names[i] << ": mean " << format_double(mean[r]) << ", std "
          << format_double(sd[r]) << "\n";
    }
}

std::vector<double> output_grid(double tstop, double tstep) {
    std::vector<double> out;
    if (!(tstep > 0.0)) return out;
    const auto count = static_cast<long long>(std::floor(tstop / tstep + 1e-9));
    if (count > 10000000) throw InputError("output grid has too many points");
    for (long long i = 1; i <= count; ++i) out.push_back(std::min(tstop, static_cast<double>(i) * tstep));
    if (out.empty() || out.back() < tstop) out.push_back(tstop);
    return out;
}

stsolver::TransientOptions transient_options(const Common& c, const TransientArgs& t,
                                             const Loaded& loaded) {
    stsolver::TransientOptions o;
    double tstop = t.tstop;
    double tstep = t.tstep;
    if (loaded.source) {
        for (const auto& a : loaded.source->analyses) {
            if (a.kind == netlist::Analysis::Kind::Tran && a.args.size() == 2) {
                if (!(tstop > 0.0)) tstop = a.args[1];
                if (!(tstep > 0.0)) tstep = a.args[0];
            }
        }
    }
    if (!(tstop > 0.0)) throw InputError("transient needs --tstop (or a .tran line)");
    o.t1 = tstop;
    o.tol = t.tol;
    o.fixed_step = t.fixed_step;
    o.output_times = output_grid(tstop, tstep);
    o.newton = newton_options(c);
    o.threads = c.threads;
    return o;
}

void run_dc(const Common& c, Artifacts& a) {
    const Loaded l = load(c, false);
    const auto space = stsolver::make_space(l.dae.distributions, c.order, selection_options(c));
    const stsolver::DcResult r = stsolver::solve_dc(l.dae, space, dc_options(c));
    a.files.emplace_back(out_path(c, "dc_stats.csv"), stsolver::dc_stats_csv(r.expansion, l.dae.unknown_names));
    a.files.emplace_back(out_path(c, "dc_expansion.json"), polychaos::to_json(r.expansion).dump(2) + "\n");
    a.summary << "stochastic DC: " << l.dae.name << "\n";
    describe_space(a.summary, space);
    a.summary << "Newton iterations: " << r.total_iterations
              << ", worst residual: " << format_double(r.worst_residual) << "\n";
    summarize_expansion(a.summary, r.expansion, l.dae.unknown_names);
}

void run_transient(const Common& c, const TransientArgs& t, Artifacts& a) {
    const Loaded l = load(c, false);
    const auto space = stsolver::make_space(l.dae.distributions, c.order, selection_options(c));
    const auto opts = transient_options(c, t, l);
    const stsolver::StSolution sol = stsolver::integrate_transient(l.dae, space, opts);
    a.files.emplace_back(out_path(c, "transient_stats.csv"),
                         stsolver::transient_csv(sol, l.dae.unknown_names));
    if (t.json) {
        a.files.emplace_back(out_path(c, "transient_expansions.json"),
                             stsolver::transient_json(sol).dump(2) + "\n");
    }
    a.summary << "stochastic transient: " << l.dae.name << " to t=" << format_double(opts.t1) << "\n";
    describe_space(a.summary, space);
    a.summary << "steps accepted: " << sol.accepted << ", rejected: " << sol.rejected
              << ", recorded times: " << sol.times.size() << "\n";
    a.summary << "at t=" << format_double(sol.times.back()) << ":\n";
    summarize_expansion(a.summary, sol.expansions.back(), l.dae.unknown_names);
}

void run_mc(const Common& c, const McArgs& m, const TransientArgs& t, Artifacts& a) {
    const Loaded l = load(c, false);
    montecarlo::McOptions o;
    o.samples = m.samples;
    o.seed = m.seed;
    o.threads = c.threads;
    o.bins = m.bins;
    montecarlo::McResult r;
    if (m.time > 0.0) {
        stsolver::TransientOptions topt;
        topt.t1 = m.time;
        topt.tol = t.tol;
        topt.fixed_step = t.fixed_step;
        topt.newton = newton_options(c);
        r = montecarlo::run_mc_transient(l.dae, m.time, topt, o);
    } else {
        r = montecarlo::run_mc_dc(l.dae, o, newton_options(c));
    }
    const std::size_t out_idx = l.dae.unknown_index(l.output);
    std::string stats = "unknown,mean,std,std_error\n";
    for (std::size_t i = 0; i < l.dae.n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        stats += l.dae.unknown_names[i] + "," + format_double(r.mean[k]) + "," +
                 format_double(std::sqrt(r.variance[k])) + "," + format_double(r.std_error[k]) + "\n";
    }
    a.files.emplace_back(out_path(c, "mc_stats.csv"), stats);
    a.files.emplace_back(out_path(c, "mc_histogram.csv"), montecarlo::histogram_csv(r.histograms[out_idx]));
    a.summary << "Monte Carlo: " << l.dae.name << ", " << r.n_samples << " samples (" << r.failed
              << " failed), seed " << r.seed << "\n";
    const auto k = static_cast<Eigen::Index>(out_idx);
    a.summary << "  " << l.output << ": mean " << format_double(r.mean[k]) << " +- "
              << format_double(r.std_error[k]) << ", std " << format_double(std::sqrt(r.variance[k]))
              << "\n";
}

void run_anova(const Common& c, const AnovaArgs& an, Artifacts& a) {
    const Loaded l = load(c, false);
    anova::AnovaOptions o;
    o.m = an.m;
    o.sigma = an.sigma;
    o.p = c.order;
    o.selection = selection_options(c);
    o.threads = c.threads;
    if (!an.anchor.empty()) o.anchor_unit = Eigen::Map<const Vector>(an.anchor.data(), static_cast<Eigen::Index>(an.anchor.size()));
    const auto dec = anova::adaptive_anova(l.dae, l.dae.unknown_index(l.output), o, dc_options(c));
    const nlohmann::json report = anova::anova_report(dec, l.dae.parameter_names);
    a.files.emplace_back(out_path(c, "anova_report.json"), report.dump(2) + "\n");
    if (dec.expansion.variance() > 0.0) {
        a.files.emplace_back(out_path(c, "sensitivity.csv"),
                             anova::sensitivity_csv(anova::sensitivities(dec.expansion), l.dae.parameter_names));
    }
    a.summary << "anchored ANOVA: " << l.dae.name << ", output " << l.output << "\n";
    a.summary << "d=" << l.dae.d << " m=" << dec.m << " sigma=" << format_double(dec.sigma)
              << " p=" << dec.p << "\n";
    const auto counts = dec.level_counts();
    a.summary << "terms per level:";
    for (auto n : counts) a.summary << " " << n;
    a.summary << "\nterms: " << dec.term_count() << ", samples: " << anova::sample_count(counts, dec.p)
              << "\n";
    a.summary << "mean " << format_double(dec.expansion.mean()) << ", std "
              << format_double(std::sqrt(dec.expansion.variance())) << "\n";
}

void run_sensitivity(const Common& c, Artifacts& a) {
    const Loaded l = load(c, false);
    const auto space = stsolver::make_space(l.dae.distributions, c.order, selection_options(c));
    const stsolver::DcResult r = stsolver::solve_dc(l.dae, space, dc_options(c));
    const auto e = r.expansion.component(l.dae.unknown_index(l.output));
    const anova::Sensitivities s = anova::sensitivities(e);
    a.files.emplace_back(out_path(c, "sensitivity.csv"), anova::sensitivity_csv(s, l.dae.parameter_names));
    a.summary << "global sensitivity of " << l.output << " (" << l.dae.name << ")\n";
    describe_space(a.summary, space);
    for (Eigen::Index k = 0; k < s.S.size(); ++k) {
        const auto i = static_cast<std::size_t>(k);
        a.summary << "  " << (i < l.dae.parameter_names.size() ? l.dae.parameter_names[i] : "xi" + std::to_string(k + 1))
                  << ": S " << format_double(s.S[k]) << ", T " << format_double(s.T[k]) << "\n";
    }
}

void run_hier_extract(const Common& c, const HierArgs& h, const TransientArgs& t, Artifacts& a) {
    const Loaded l = load(c, false);
    const auto space = stsolver::make_space(l.dae.distributions, c.order, selection_options(c));
    const std::size_t idx = l.dae.unknown_index(l.output);
    std::optional<polychaos::GpcExpansion> y;
    if (h.analysis == "dc") {
        y = stsolver::solve_dc(l.dae, space, dc_options(c)).expansion.component(idx);
    } else {
        const auto opts = transient_options(c, t, l);
        y = stsolver::integrate_transient(l.dae, space, opts).expansions.back().component(idx);
    }
    const hier::Surrogate s = hier::normalize_surrogate(*y);
    const fs::path target = h.surrogate_out.empty() ? out_path(c, "surrogate.json") : fs::path(h.surrogate_out);
    a.files.emplace_back(target, polychaos::to_json(*y).dump(2) + "\n");
    a.summary << "surrogate of " << l.output << " (" << l.dae.name << "): a=" << format_double(s.a)
              << " b=" << format_double(s.b) << "\n";
    describe_space(a.summary, space);
}

void run_hier_propagate(const Common& c, const HierArgs& h, const TransientArgs& t, Artifacts& a) {
    if (c.netlist.empty()) throw InputError("hier-propagate needs a system-level --netlist");
    const Loaded l = load(c, true);
    if (h.route != "auto" && h.route != "quadrature" && h.route != "sampling") {
        throw InputError("--route must be auto, quadrature or sampling");
    }
    hier::ZetaBases zeta;
    nlohmann::json bases_doc = nlohmann::json::array();
    for (std::size_t i = 0; i < h.surrogates.size(); ++i) {
        const hier::Surrogate s = hier::normalize_surrogate(polychaos::read_expansion(h.surrogates[i]));
        const bool quad = h.route == "quadrature" || (h.route == "auto" && s.zeta.dimension() <= 3);
        hier::IntermediateDensity dens = [&] {
            if (quad) return hier::density_by_quadrature(s, hier::quadrature_points_for(s, c.order));
            hier::SamplingOptions so;
            so.samples = h.samples;
            so.seed = h.seed;
            return hier::density_by_sampling(s, so);
        }();
        auto [basis, rule] = hier::build_intermediate_basis(dens, c.order);
        bases_doc.push_back({{"zeta", i + 1}, {"route", quad ? "quadrature" : "sampling"},
                             {"a", s.a}, {"b", s.b}, {"basis", polychaos::to_json(basis)}});
        zeta.emplace(static_cast<int>(i + 1), std::move(basis));
    }
    auto bases = hier::system_bases(*l.elaboration, zeta, c.order);
    const auto space = hier::system_space(std::move(bases), c.order, selection_options(c));
    a.files.emplace_back(out_path(c, "zeta_bases.json"), bases_doc.dump(2) + "\n");
    a.summary << "hierarchical propagation: " << l.dae.name << " with " << zeta.size()
              << " intermediate variable(s)\n";
    describe_space(a.summary, space);
    if (h.analysis == "dc") {
        const auto r = hier::propagate_dc(l.dae, space, dc_options(c));
        a.files.emplace_back(out_path(c, "hier_stats.csv"), stsolver::dc_stats_csv(r.expansion, l.dae.unknown_names));
        a.files.emplace_back(out_path(c, "hier_expansion.json"), polychaos::to_json(r.expansion).dump(2) + "\n");
        summarize_expansion(a.summary, r.expansion, l.dae.unknown_names);
    } else {
        const auto sol = hier::propagate_transient(l.dae, space, transient_options(c, t, l));
        a.files.emplace_back(out_path(c, "hier_transient.csv"), stsolver::transient_csv(sol, l.dae.unknown_names));
        a.summary << "at t=" << format_double(sol.times.back()) << ":\n";
        summarize_expansion(a.summary, sol.expansions.back(), l.dae.unknown_names);
    }
}

void add_transient_options(CLI::App* sub, TransientArgs& t, bool grid) {
    sub->add_option("--tstop", t.tstop, "End time (default: from .tran)");
    if (grid) sub->add_option("--tstep", t.tstep, "Output grid spacing (default: from .tran)");
    sub->add_option("--tol", t.tol, "Local truncation error tolerance");
    sub->add_option("--fixed-step", t.fixed_step, "Fixed step size, no error control");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic spectral circuit and system simulator"};
    app.name("uqsim");
    app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");
    app.require_subcommand(1, 1);

    Common common;
    TransientArgs tran;
    McArgs mc;
    AnovaArgs an;
    HierArgs hier_args;

    auto* dc = app.add_subcommand("dc", "Stochastic DC operating point");
    add_common(dc, common);
    auto* transient = app.add_subcommand("transient", "Stochastic transient");
    add_common(transient, common);
    add_transient_options(transient, tran, true);
    transient->add_flag("--json", tran.json, "Also write the expansion at every recorded time");
    auto* mcs = app.add_subcommand("mc", "Monte Carlo reference");
    add_common(mcs, common);
    mcs->add_option("--samples", mc.samples, "Sample count")->check(CLI::PositiveNumber);
    mcs->add_option("--seed", mc.seed, "RNG seed");
    mcs->add_option("--bins", mc.bins, "Histogram bins")->check(CLI::PositiveNumber);
    mcs->add_option("--time", mc.time, "Sample the transient state at this time instead of DC");
    mcs->add_option("--tol", tran.tol, "Transient LTE tolerance");
    mcs->add_option("--fixed-step", tran.fixed_step, "Transient fixed step");
    auto* anova_cmd = app.add_subcommand("anova", "Adaptive anchored ANOVA decomposition");
    add_common(anova_cmd, common);
    anova_cmd->add_option("--m", an.m, "Effective dimension");
    anova_cmd->add_option("--sigma", an.sigma, "Pruning threshold");
    anova_cmd->add_option("--anchor", an.anchor, "Anchor in uniform space, one value per parameter")
        ->delimiter(',');
    auto* sens = app.add_subcommand("sensitivity", "Main and total sensitivity from the full expansion");
    add_common(sens, common);
    auto* hx = app.add_subcommand("hier-extract", "Block surrogate for hierarchical analysis");
    add_common(hx, common);
    hx->add_option("--analysis", hier_args.analysis, "dc or transient")->check(CLI::IsMember({"dc", "transient"}));
    hx->add_option("--surrogate-out", hier_args.surrogate_out, "Surrogate JSON path (default <out>/surrogate.json)");
    add_transient_options(hx, tran, false);
    auto* hp = app.add_subcommand("hier-propagate", "System-level propagation over intermediate variables");
    add_common(hp, common);
    hp->add_option("--surrogate", hier_args.surrogates, "Surrogate JSON for zeta(1), zeta(2), ... in order")
        ->required();
    hp->add_option("--route", hier_args.route, "Density route: auto, quadrature or sampling");
    hp->add_option("--samples", hier_args.samples, "Samples for the sampling route");
    hp->add_option("--seed", hier_args.seed, "Seed for the sampling route");
    hp->add_option("--analysis", hier_args.analysis, "dc or transient")->check(CLI::IsMember({"dc", "transient"}));
    add_transient_options(hp, tran, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        std::string msg = e.what();
        for (char& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        err << "error: usage: " << msg << "\n";
        return kExitUser;
    }

    auto fail = [&](const char* category, std::string msg) {
        for (char& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        err << "error: " << category << ": " << msg << "\n";
    };

    try {
        Artifacts a;
        if (dc->parsed()) run_dc(common, a);
        else if (transient->parsed()) run_transient(common, tran, a);
        else if (mcs->parsed()) run_mc(common, mc, tran, a);
        else if (anova_cmd->parsed()) run_anova(common, an, a);
        else if (sens->parsed()) run_sensitivity(common, a);
        else if (hx->parsed()) run_hier_extract(common, hier_args, tran, a);
        else if (hp->parsed()) run_hier_propagate(common, hier_args, tran, a);
        std::error_code ec;
        fs::create_directories(common.out_dir, ec);
        if (ec) throw InputError("cannot create output directory '" + common.out_dir + "': " + ec.message());
        for (const auto& [path, content] : a.files) {
            if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
            write_file_atomic(path, content);
        }
        out << a.summary.str();
        for (const auto& f : a.files) out << "wrote " << f.first.string() << "\n";
        return kExitOk;
    } catch (const InputError& e) {
        fail("input", e.what());
        return kExitUser;
    } catch (const NumericError& e) {
        fail("numeric", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        fail("internal", e.what());
        return kExitNumeric;
    }
}

}  // namespace uqsim::cli
