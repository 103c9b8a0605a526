#ifndef CCB_HARNESS_HPP
#define CCB_HARNESS_HPP

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "ccb/bandit.hpp"
#include "ccb/instances.hpp"
#include "ccb/model_io.hpp"

namespace ccb {

struct ExperimentSpec {
    std::string preset;  // "" when built from an explicit model file
    CausalModel model;
    std::vector<std::string> algorithms;
    std::vector<long> horizons;
    int runs = 50;
    std::uint64_t seed_base = 1;
    double c0 = 1.0;
    double c1 = 1.0;
    double rho_scale = 1.0;
    DiscoveryScope scope = DiscoveryScope::AllPairs;
    bool skip_second_init = false;
    int budget = 2;  // arm set: all do(S=1) with |S| = budget
    int workers = 0;  // 0 = hardware concurrency
    ActionSet actions;  // filled from budget when empty
};

inline const std::vector<std::string>& algorithm_ids() {
    static const std::vector<std::string> ids = {
        "bglm-ofu-unknown", "blm-lr-unknown", "blm-lr-unknown-sg", "ucb",
        "eps-greedy"};
    return ids;
}

inline int algorithm_index(const std::string& id) {
    const auto& ids = algorithm_ids();
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return static_cast<int>(i);
    throw std::invalid_argument("unknown algorithm id: " + id);
}

inline RegretTrace run_algorithm(const std::string& id,
                                 const CausalModel& env,
                                 const RunConfig& cfg) {
    switch (algorithm_index(id)) {
        case 0: return run_bglm_ofu_unknown(env, cfg);
        case 1: return run_blm_lr_unknown(env, cfg);
        case 2: return run_blm_lr_unknown_sg(env, cfg);
        case 3: return run_ucb_baseline(env, cfg);
        default: return run_eps_greedy(env, cfg);
    }
}

struct RunRecord {
    std::string algorithm;
    long T = 0;
    int run = 0;
    RegretTrace trace;
};

struct AggregateRow {
    long T = 0;
    std::string algorithm;
    double mean_cum_regret = 0.0;
    double stderr_mean = 0.0;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<RunRecord> records;      // ordered (algorithm, T, run)
    std::vector<AggregateRow> aggregate;  // ordered (T, algorithm)
};

// Appendix-style reproduction preset: X-Y discovery scope only, shrunken
// confidence radii, no separate second init phase, budget-2 arm set.
inline ExperimentSpec appendix_e_spec(bool small = false) {
    ExperimentSpec s;
    s.preset = small ? "appendix-e-small" : "appendix-e";
    s.model = appendix_e_instance();
    s.algorithms = {"bglm-ofu-unknown", "blm-lr-unknown", "ucb",
                    "eps-greedy"};
    s.horizons = small ? std::vector<long>{10000, 20000}
                       : std::vector<long>{10000, 20000, 40000, 80000};
    s.runs = small ? 20 : 50;
    s.c0 = 0.1;
    s.c1 = 0.1;
    s.rho_scale = 0.1;
    s.scope = DiscoveryScope::TargetOnly;
    s.skip_second_init = true;
    s.budget = 2;
    return s;
}

inline RunConfig run_config_of(const ExperimentSpec& spec, long T) {
    RunConfig cfg;
    cfg.T = T;
    cfg.c0 = spec.c0;
    cfg.c1 = spec.c1;
    cfg.rho_scale = spec.rho_scale;
    cfg.scope = spec.scope;
    cfg.skip_second_init = spec.skip_second_init;
    cfg.actions = spec.actions.actions.empty()
                      ? all_ones_budget_actions(spec.model, spec.budget)
                      : spec.actions;
    return cfg;
}

inline ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.algorithms.empty() || spec.horizons.empty() || spec.runs < 1)
        throw std::invalid_argument("experiment spec needs algorithms, "
                                    "horizons and a positive run count");
    ExperimentResult res;
    res.spec = spec;
    for (const auto& algo : spec.algorithms)
        for (long T : spec.horizons)
            for (int run = 0; run < spec.runs; ++run) {
                RunRecord r;
                r.algorithm = algo;
                r.T = T;
                r.run = run;
                res.records.push_back(r);
            }
    // Results land in pre-assigned slots, so output order does not depend
    // on thread scheduling.
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t j = next.fetch_add(1);
            if (j >= res.records.size()) return;
            RunRecord& r = res.records[j];
            RunConfig cfg = run_config_of(spec, r.T);
            cfg.seed = mix_seed(mix_seed(spec.seed_base, r.T, 0), r.run,
                                algorithm_index(r.algorithm));
            r.trace = run_algorithm(r.algorithm, spec.model, cfg);
        }
    };
    unsigned w = spec.workers > 0
                     ? static_cast<unsigned>(spec.workers)
                     : std::max(1u, std::thread::hardware_concurrency());
    w = std::min<unsigned>(w, res.records.size());
    if (w <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < w; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    // aggregate over runs, rows ordered (T, algorithm)
    for (long T : spec.horizons) {
        std::vector<std::string> algos = spec.algorithms;
        std::sort(algos.begin(), algos.end());
        for (const auto& algo : algos) {
            std::vector<double> xs;
            for (const auto& r : res.records)
                if (r.T == T && r.algorithm == algo)
                    xs.push_back(r.trace.cum_regret());
            AggregateRow row;
            row.T = T;
            row.algorithm = algo;
            for (double x : xs) row.mean_cum_regret += x;
            row.mean_cum_regret /= xs.size();
            if (xs.size() > 1) {
                double ss = 0.0;
                for (double x : xs) {
                    double d = x - row.mean_cum_regret;
                    ss += d * d;
                }
                row.stderr_mean =
                    std::sqrt(ss / (xs.size() - 1) / xs.size());
            }
            res.aggregate.push_back(row);
        }
    }
    std::sort(res.aggregate.begin(), res.aggregate.end(),
              [](const AggregateRow& a, const AggregateRow& b) {
                  return a.T != b.T ? a.T < b.T : a.algorithm < b.algorithm;
              });
    return res;
}

namespace detail {

inline std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline std::string run_id_of(const RunRecord& r) {
    return r.algorithm + ":" + std::to_string(r.T) + ":" +
           std::to_string(r.run);
}

inline void write_trace_csv(std::ostream& out,
                            const std::vector<RunRecord>& records) {
    out << "run_id,t,action_id,y,expected_reward,inst_regret,cum_regret\n";
    for (const auto& r : records) {
        std::string id = run_id_of(r);
        double cum = 0.0;
        for (const auto& row : r.trace.rows) {
            cum += row.inst_regret;
            out << id << "," << row.t << "," << row.action_id << ","
                << detail::fmt_num(row.y) << ","
                << detail::fmt_num(row.expected) << ","
                << detail::fmt_num(row.inst_regret) << ","
                << detail::fmt_num(cum) << "\n";
        }
    }
}

inline void write_aggregate_csv(std::ostream& out,
                                const std::vector<AggregateRow>& rows) {
    out << "T,algorithm,mean_cum_regret,stderr\n";
    for (const auto& r : rows)
        out << r.T << "," << r.algorithm << ","
            << detail::fmt_num(r.mean_cum_regret) << ","
            << detail::fmt_num(r.stderr_mean) << "\n";
}

inline std::vector<AggregateRow> read_aggregate_csv(std::istream& in) {
    std::vector<AggregateRow> rows;
    std::string line;
    if (!std::getline(in, line) ||
        line != "T,algorithm,mean_cum_regret,stderr")
        throw std::invalid_argument("not an aggregate CSV");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        AggregateRow r;
        std::string tok;
        std::getline(ls, tok, ',');
        r.T = std::stol(tok);
        std::getline(ls, r.algorithm, ',');
        std::getline(ls, tok, ',');
        r.mean_cum_regret = std::stod(tok);
        std::getline(ls, tok, ',');
        r.stderr_mean = std::stod(tok);
        rows.push_back(r);
    }
    return rows;
}

inline void write_metadata(std::ostream& out, const ExperimentSpec& spec) {
    out << "preset " << (spec.preset.empty() ? "-" : spec.preset) << "\n";
    out << "algorithms";
    for (const auto& a : spec.algorithms) out << " " << a;
    out << "\nhorizons";
    for (long T : spec.horizons) out << " " << T;
    out << "\nruns " << spec.runs << "\n";
    out << "seed_base " << spec.seed_base << "\n";
    out << "c0 " << detail::fmt_num(spec.c0) << "\n";
    out << "c1 " << detail::fmt_num(spec.c1) << "\n";
    out << "rho_scale " << detail::fmt_num(spec.rho_scale) << "\n";
    out << "scope "
        << (spec.scope == DiscoveryScope::TargetOnly ? "target" : "all")
        << "\n";
    out << "skip_second_init " << (spec.skip_second_init ? 1 : 0) << "\n";
    out << "budget " << spec.budget << "\n";
    out << "model_begin\n" << serialize_model(spec.model) << "model_end\n";
}

// x = horizon, y = mean cumulative regret, one series per algorithm.
inline std::string emit_plot(const std::vector<AggregateRow>& rows) {
    if (rows.empty()) throw std::invalid_argument("empty aggregate");
    const double W = 720, H = 480, ML = 70, MR = 150, MT = 20, MB = 50;
    double xmin = rows[0].T, xmax = rows[0].T;
    double ymin = 0.0, ymax = rows[0].mean_cum_regret;
    for (const auto& r : rows) {
        xmin = std::min(xmin, static_cast<double>(r.T));
        xmax = std::max(xmax, static_cast<double>(r.T));
        ymax = std::max(ymax, r.mean_cum_regret);
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double t) {
        return ML + (W - ML - MR) * (t - xmin) / (xmax - xmin);
    };
    auto py = [&](double v) {
        return H - MB - (H - MT - MB) * (v - ymin) / (ymax - ymin);
    };
    std::vector<std::string> algos;
    for (const auto& r : rows)
        if (std::find(algos.begin(), algos.end(), r.algorithm) == algos.end())
            algos.push_back(r.algorithm);
    std::sort(algos.begin(), algos.end());
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b"};
    char buf[160];
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
        << "\" height=\"" << H << "\">\n";
    std::snprintf(buf, sizeof(buf),
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\""
                  " fill=\"none\" stroke=\"black\"/>\n",
                  ML, MT, W - ML - MR, H - MT - MB);
    svg << buf;
    for (std::size_t a = 0; a < algos.size(); ++a) {
        std::ostringstream pts;
        for (const auto& r : rows)
            if (r.algorithm == algos[a]) {
                std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(r.T),
                              py(r.mean_cum_regret));
                pts << buf;
            }
        svg << "<polyline fill=\"none\" stroke=\""
            << palette[a % 6] << "\" stroke-width=\"2\" points=\""
            << pts.str() << "\"/>\n";
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" "
                      "fill=\"%s\">%s</text>\n",
                      W - MR + 10, MT + 20 + 18.0 * a, palette[a % 6],
                      algos[a].c_str());
        svg << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\">t</text>\n",
                  ML + (W - ML - MR) / 2, H - 12.0);
    svg << buf;
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"14\" y=\"%.1f\" font-size=\"13\" "
                  "transform=\"rotate(-90 14 %.1f)\">mean cumulative "
                  "regret</text>\n",
                  MT + (H - MT - MB) / 2, MT + (H - MT - MB) / 2);
    svg << buf;
    svg << "</svg>\n";
    return svg.str();
}

inline void emit_plot(const std::vector<AggregateRow>& rows,
                      const std::string& path) {
    std::string svg = emit_plot(rows);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << svg;
}

// trace.csv + aggregate.csv + metadata.txt under out_dir.
inline void write_outputs(const ExperimentResult& res,
                          const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto open = [&](const char* name) {
        std::ofstream f(std::filesystem::path(out_dir) / name,
                        std::ios::binary);
        if (!f)
            throw std::invalid_argument(std::string("cannot write ") + name +
                                        " in " + out_dir);
        return f;
    };
    {
        auto f = open("trace.csv");
        write_trace_csv(f, res.records);
    }
    {
        auto f = open("aggregate.csv");
        write_aggregate_csv(f, res.aggregate);
    }
    {
        auto f = open("metadata.txt");
        write_metadata(f, res.spec);
    }
}

}  // namespace ccb

#endif  // CCB_HARNESS_HPP
