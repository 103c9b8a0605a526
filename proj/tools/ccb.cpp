#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccb/harness.hpp"
#include "ccb/instances.hpp"
#include "ccb/model_io.hpp"
#include "ccb/pure_explore.hpp"

namespace {

using namespace ccb;

CausalModel resolve_model(const std::string& model_path,
                          const std::string& preset) {
    if (!model_path.empty() && !preset.empty())
        throw CLI::ValidationError("--model and --preset are exclusive");
    if (!model_path.empty()) return load_model(model_path);
    if (preset == "appendix-e" || preset.empty()) return appendix_e_instance();
    throw CLI::ValidationError("unknown preset " + preset);
}

Intervention parse_do(const std::vector<std::string>& specs,
                      const CausalModel& m) {
    Intervention a;
    for (const auto& s : specs) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--do expects NODE=VALUE, got " + s);
        int node = detail::parse_node(s.substr(0, eq), m.node_count());
        int value = std::stoi(s.substr(eq + 1));
        a.set(node, value);
    }
    m.check_intervention(a);
    return a;
}

std::string intervention_name(const Intervention& a, int node_count) {
    std::string s = "do(";
    bool first = true;
    for (const auto& p : a.assign) {
        if (!first) s += ",";
        first = false;
        s += detail::node_name(p.first, node_count) + "=" +
             std::to_string(p.second);
    }
    return s + ")";
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw CLI::ValidationError("cannot write " + path);
    return file;
}

int cmd_simulate(const std::string& model_path, const std::string& preset,
                 const std::vector<std::string>& do_specs, long samples,
                 std::uint64_t seed, const std::string& out_path) {
    CausalModel m = resolve_model(model_path, preset);
    Intervention a = parse_do(do_specs, m);
    std::ofstream file;
    std::ostream& out = open_or_stdout(file, out_path);
    for (int x = 0; x < m.node_count(); ++x)
        out << (x ? "," : "") << detail::node_name(x, m.node_count());
    out << "\n";
    RandomStream rng(seed);
    char buf[32];
    for (long i = 0; i < samples; ++i) {
        Sample s = sample(m, a, rng);
        for (int x = 0; x < m.node_count(); ++x) {
            std::snprintf(buf, sizeof(buf), "%.17g", s.v[x]);
            out << (x ? "," : "") << buf;
        }
        out << "\n";
    }
    return 0;
}

int cmd_discover(const std::string& model_path, const std::string& preset,
                 const std::string& mode, double c0, double c1, long T,
                 const std::string& scope, std::uint64_t seed,
                 const std::string& out_path) {
    CausalModel m = resolve_model(model_path, preset);
    ScheduleMode sm =
        mode == "two-thirds" ? ScheduleMode::TwoThirds : ScheduleMode::Sqrt;
    DiscoveryScope sc = scope == "target" ? DiscoveryScope::TargetOnly
                                          : DiscoveryScope::AllPairs;
    Schedule sched = init_schedule(m.nx, c0, T, sm);
    RandomStream rng(seed);
    InitObservationLog log = run_init_schedule(m, sched, rng);
    AncestorRelation rel =
        sm == ScheduleMode::Sqrt
            ? bglm_ancestors(log, c0, c1, T, m.node_count(), sc)
            : nogap_blm_ancestors(log, c0, c1, T, m.node_count(), sc);
    std::ofstream file;
    std::ostream& out = open_or_stdout(file, out_path);
    for (int x = 1; x < m.node_count(); ++x) {
        out << "anc " << detail::node_name(x, m.node_count());
        for (int p : rel.ancestors_of(x))
            out << " " << detail::node_name(p, m.node_count());
        out << "\n";
    }
    return 0;
}

int cmd_regret(ExperimentSpec spec, const std::string& model_path,
               const std::string& scope, const std::string& out_dir) {
    if (!model_path.empty()) {
        spec.preset = "";
        spec.model = load_model(model_path);
    }
    if (scope == "target") spec.scope = DiscoveryScope::TargetOnly;
    if (scope == "all") spec.scope = DiscoveryScope::AllPairs;
    ExperimentResult res = run_experiment(spec);
    write_outputs(res, out_dir);
    std::cout << "wrote trace.csv, aggregate.csv, metadata.txt to " << out_dir
              << "\n";
    for (const auto& r : res.aggregate)
        std::cout << "T=" << r.T << " " << r.algorithm
                  << " mean_cum_regret=" << r.mean_cum_regret
                  << " stderr=" << r.stderr_mean << "\n";
    return 0;
}

int cmd_pure_explore(const std::string& model_path, const std::string& preset,
                     double eps, double delta, long cap, std::uint64_t seed,
                     bool known_graph, bool no_observational,
                     const std::string& trace_path) {
    CausalModel m = resolve_model(model_path, preset);
    PEConfig cfg;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.cap = cap;
    cfg.seed = seed;
    cfg.use_observational = !no_observational;
    std::ofstream trace;
    if (!trace_path.empty()) {
        trace.open(trace_path, std::ios::binary);
        if (!trace) throw CLI::ValidationError("cannot write " + trace_path);
        trace << "t,arm,lower,upper,midpoint\n";
        cfg.on_round = [&](long t, const std::vector<ArmState>& st) {
            for (std::size_t a = 0; a < st.size(); ++a)
                trace << t << "," << a << "," << st[a].L << "," << st[a].U
                      << "," << st[a].mu << "\n";
        };
    }
    EssentialGraph eg = known_graph ? EssentialGraph::oriented_of(m)
                                    : EssentialGraph::skeleton_of(m);
    const auto arms = cfg.arms.empty() ? default_pe_arms(m) : cfg.arms;
    PEResult r = causal_pe_unknown(m, eg, cfg);
    std::cout << "chosen_arm " << r.arm_index;
    if (r.arm_index >= 0)
        std::cout << " "
                  << intervention_name(arms[r.arm_index].action,
                                       m.node_count());
    std::cout << "\n";
    std::cout << "samples_used " << r.samples_used << "\n";
    std::cout << "rounds " << r.rounds << "\n";
    std::cout << "certified " << (r.certified ? 1 : 0) << "\n";
    for (std::size_t a = 0; a < r.arms.size(); ++a)
        std::cout << "arm " << a << " "
                  << intervention_name(arms[a].action, m.node_count())
                  << " lower " << r.arms[a].L << " upper " << r.arms[a].U
                  << "\n";
    return 0;
}

int cmd_reproduce(bool small, const std::string& out_dir, std::uint64_t seed,
                  int workers) {
    ExperimentSpec spec = appendix_e_spec(small);
    spec.seed_base = seed;
    spec.workers = workers;
    ExperimentResult res = run_experiment(spec);
    write_outputs(res, out_dir);
    emit_plot(res.aggregate,
              (std::filesystem::path(out_dir) / "regret.svg").string());
    std::cout << "wrote trace.csv, aggregate.csv, metadata.txt, regret.svg "
                 "to " << out_dir << "\n";
    for (const auto& r : res.aggregate)
        std::cout << "T=" << r.T << " " << r.algorithm
                  << " mean_cum_regret=" << r.mean_cum_regret
                  << " stderr=" << r.stderr_mean << "\n";
    return 0;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
    std::ifstream in(in_path);
    if (!in) throw CLI::ValidationError("cannot open " + in_path);
    emit_plot(read_aggregate_csv(in), out_path);
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"causal bandit simulation toolkit"};
    app.require_subcommand(1);

    std::string model_path, preset, out_path, out_dir, mode = "sqrt";
    std::string scope, trace_path, in_path;
    std::vector<std::string> do_specs;
    long samples = 1, T = 10000, cap = 10000000;
    std::uint64_t seed = 1;
    double c0 = 1.0, c1 = 1.0, eps = 0.05, delta = 0.05;
    bool small = false, known_graph = false, no_observational = false;
    int workers = 0;
    // regret defaults follow the appendix-e protocol; flags override
    ExperimentSpec spec = appendix_e_spec();
    spec.horizons.clear();

    auto add_model_opts = [&](CLI::App* c) {
        c->add_option("--model", model_path, "model file path");
        c->add_option("--preset", preset, "instance preset (appendix-e)");
    };

    auto* sim = app.add_subcommand("simulate", "draw samples under do()");
    add_model_opts(sim);
    sim->add_option("--do", do_specs, "intervention, e.g. X2=1 (repeatable)");
    sim->add_option("--samples", samples, "sample count")
        ->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "rng seed");
    sim->add_option("--out", out_path, "output file (default stdout)");

    auto* dis = app.add_subcommand("discover",
                                   "run the initialization phase and emit "
                                   "the detected ancestor relation");
    add_model_opts(dis);
    dis->add_option("--mode", mode, "sqrt | two-thirds")
        ->check(CLI::IsMember({"sqrt", "two-thirds"}));
    dis->add_option("--c0", c0, "schedule constant");
    dis->add_option("--c1", c1, "threshold constant");
    dis->add_option("--T", T, "horizon")->check(CLI::PositiveNumber);
    dis->add_option("--scope", scope, "all | target")
        ->check(CLI::IsMember({"", "all", "target"}));
    dis->add_option("--seed", seed, "rng seed");
    dis->add_option("--out", out_path, "output file (default stdout)");

    auto* reg = app.add_subcommand("regret", "regret-minimization runs");
    add_model_opts(reg);
    reg->add_option("--algo", spec.algorithms,
                    "algorithm ids (repeatable): bglm-ofu-unknown, "
                    "blm-lr-unknown, blm-lr-unknown-sg, ucb, eps-greedy");
    reg->add_option("--T", spec.horizons, "horizons (repeatable)")
        ->required();
    reg->add_option("--runs", spec.runs, "replications per (algo, T)");
    reg->add_option("--seed", spec.seed_base, "seed base");
    reg->add_option("--c0", spec.c0, "schedule constant");
    reg->add_option("--c1", spec.c1, "threshold constant");
    reg->add_option("--rho-scale", spec.rho_scale,
                    "confidence radius multiplier");
    reg->add_option("--scope", scope, "discovery scope: all | target")
        ->check(CLI::IsMember({"", "all", "target"}));
    reg->add_option("--skip-second-init", spec.skip_second_init,
                    "1: drop the null-intervention phase (default 1)");
    reg->add_option("--budget", spec.budget, "arm set: do(S=1), |S|=budget");
    reg->add_option("--workers", spec.workers, "worker threads (0 = auto)");
    reg->add_option("--out", out_dir, "output directory")->required();

    auto* pe = app.add_subcommand("pure-explore",
                                  "best-arm identification run");
    add_model_opts(pe);
    pe->add_option("--eps", eps, "optimality slack");
    pe->add_option("--delta", delta, "failure probability");
    pe->add_option("--cap", cap, "sample budget cap");
    pe->add_option("--seed", seed, "rng seed");
    pe->add_flag("--known-graph", known_graph,
                 "start from the fully oriented graph");
    pe->add_flag("--no-observational", no_observational,
                 "pure LUCB baseline: sample chosen arms directly");
    pe->add_option("--trace", trace_path, "per-round bounds CSV");

    auto* rep = app.add_subcommand("reproduce-appendix-e",
                                   "full benchmark sweep with plot");
    rep->add_flag("--small", small, "20 runs, horizons up to 2e4");
    rep->add_option("--out", out_dir, "output directory");
    rep->add_option("--seed", seed, "seed base");
    rep->add_option("--workers", workers, "worker threads (0 = auto)");

    auto* plt = app.add_subcommand("plot", "render an aggregate CSV as SVG");
    plt->add_option("--in", in_path, "aggregate.csv path")->required();
    plt->add_option("--out", out_path, "SVG output path")->required();

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("CCB_OUT_DIR"); env && out_dir.empty())
        out_dir = env;
    if (out_dir.empty()) out_dir = "out";

    try {
        if (*sim)
            return cmd_simulate(model_path, preset, do_specs, samples, seed,
                                out_path);
        if (*dis)
            return cmd_discover(model_path, preset, mode, c0, c1, T, scope,
                                seed, out_path);
        if (*reg) return cmd_regret(spec, model_path, scope, out_dir);
        if (*pe)
            return cmd_pure_explore(model_path, preset, eps, delta, cap, seed,
                                    known_graph, no_observational,
                                    trace_path);
        if (*rep) return cmd_reproduce(small, out_dir, seed, workers);
        if (*plt) return cmd_plot(in_path, out_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
