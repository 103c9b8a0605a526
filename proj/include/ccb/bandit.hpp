#ifndef CCB_BANDIT_HPP
#define CCB_BANDIT_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccb/discovery.hpp"
#include "ccb/estimation.hpp"
#include "ccb/instances.hpp"
#include "ccb/model.hpp"
#include "ccb/oracle.hpp"
#include "ccb/reward.hpp"
#include "ccb/rng.hpp"

namespace ccb {

struct RunConfig {
    long T = 0;
    double c0 = 1.0;
    double c1 = 1.0;
    std::uint64_t seed = 1;
    double rho_scale = 1.0;
    DiscoveryScope scope = DiscoveryScope::AllPairs;
    // Appendix E protocol: no separate second initialization phase.
    bool skip_second_init = false;
    int refit_every = 1;          // MLE refit cadence; 1 = literal per-round
    double eps_greedy = 0.02;
    long oracle_paths = 10000;
    // diagnostics/ablation: bypass discovery and/or estimation
    bool oracle_relation = false;  // use the true ancestor relation
    bool oracle_theta = false;     // feed transformed true parameters, rho = 0
    ActionSet actions;
};

struct TraceRow {
    long t = 0;
    int action_id = -1;  // index into cfg.actions; -1 for init-phase actions
    Intervention action;
    double y = 0.0;
    double expected = 0.0;
    double inst_regret = 0.0;
};

struct RegretTrace {
    double optimal_value = 0.0;
    std::vector<TraceRow> rows;
    AncestorRelation relation;  // discovered relation (empty for baselines)

    double cum_regret() const {
        double s = 0.0;
        for (const auto& r : rows) s += r.inst_regret;
        return s;
    }
};

inline RewardMode value_mode(const CausalModel& m) {
    if (m.is_blm() || m.continuous) return RewardMode::ExactLinear;
    if (m.node_count() <= 20) return RewardMode::Enumerate;
    return RewardMode::MonteCarlo;
}

// Fills expected rewards and instantaneous regrets from the true model;
// optimal value is the best action in the provided set (Eq. (1) semantics:
// expectations, not realized rewards).
inline void compute_regret(const CausalModel& env, const ActionSet& actions,
                           RegretTrace& trace) {
    RewardMode mode = value_mode(env);
    trace.optimal_value = 0.0;
    for (const auto& a : actions.actions)
        trace.optimal_value =
            std::max(trace.optimal_value, expected_reward(env, a, mode));
    std::map<std::vector<std::pair<int, int>>, double> cache;
    for (auto& r : trace.rows) {
        auto it = cache.find(r.action.assign);
        if (it == cache.end())
            it = cache.emplace(r.action.assign,
                               expected_reward(env, r.action, mode)).first;
        r.expected = it->second;
        r.inst_regret = trace.optimal_value - r.expected;
    }
}

namespace detail {

// Per-node regression bookkeeping over the coordinates {X1} + Anc-hat(X).
struct NodeReg {
    std::vector<int> coords;
    Mat M;
    Vec b;
    NodeDataset data;  // rows retained only for non-identity links
    bool keep_rows = false;

    void init(const std::vector<int>& cs, bool ridge, bool glm) {
        coords = cs;
        M = ridge ? Mat::identity(cs.size()) : Mat(cs.size());
        b.assign(cs.size(), 0.0);
        keep_rows = glm;
        data = NodeDataset(static_cast<int>(cs.size()));
    }
};

struct RegBank {
    std::vector<NodeReg> regs;  // index by node; node 0 unused
    int node_count = 0;

    void init(const EstimatedModel& em, bool ridge) {
        node_count = em.node_count();
        regs.assign(node_count, NodeReg());
        for (int x = 1; x < node_count; ++x)
            regs[x].init(em.coords[x], ridge,
                         em.links[x].kind != LinkKind::Identity);
    }

    // record (V, x) pairs for every node outside the intervened set
    void absorb(const Sample& s, const Intervention& a) {
        for (int x = 1; x < node_count; ++x) {
            if (a.is_set(x)) continue;
            NodeReg& r = regs[x];
            Vec V(r.coords.size());
            for (std::size_t c = 0; c < r.coords.size(); ++c)
                V[c] = s.v[r.coords[c]];
            add_outer(r.M, V);
            axpy(r.b, s.v[x], V);
            if (r.keep_rows) r.data.add(V, s.v[x]);
        }
    }

    // refresh theta-hat / M / rho on the estimated model
    void estimate(EstimatedModel& em, double rho_of_node_t, long round,
                  int refit_every, std::vector<Vec>* glm_cache) {
        for (int x = 1; x < node_count; ++x) {
            NodeReg& r = regs[x];
            em.est[x].M = r.M;
            em.est[x].rho = rho_of_node_t;
            if (!r.keep_rows) {
                em.est[x].theta_hat = solve_sym(r.M, r.b);
            } else {
                bool refit = (round % std::max(1, refit_every) == 0) ||
                             (*glm_cache)[x].empty();
                if (refit)
                    (*glm_cache)[x] =
                        mle_estimate(r.data, em.links[x]).theta_hat;
                em.est[x].theta_hat = (*glm_cache)[x];
            }
        }
    }
};

inline void play_and_record(const CausalModel& env, const Intervention& a,
                            int action_id, long t, RandomStream& rng,
                            RegBank& bank, RegretTrace& trace) {
    Sample s = sample(env, a, rng);
    bank.absorb(s, a);
    TraceRow row;
    row.t = t;
    row.action_id = action_id;
    row.action = a;
    row.y = s.y();
    trace.rows.push_back(row);
}

inline void feed_oracle_theta(const CausalModel& env, EstimatedModel& em) {
    for (int x = 1; x < em.node_count(); ++x) {
        em.est[x].theta_hat = theta_prime(env, x, em.coords[x]);
        em.est[x].M = Mat::identity(em.coords[x].size());
        em.est[x].rho = 0.0;
    }
}

enum class LrInit { TwoThirds, Sqrt };

// Shared body of the two linear-regression algorithms: init schedule +
// threshold discovery, then per-round ridge / confidence radius / oracle.
inline RegretTrace run_lr_core(const CausalModel& env, const RunConfig& cfg,
                               LrInit kind) {
    if (!env.is_blm() && !env.continuous)
        throw std::invalid_argument("linear-regression variants need a BLM");
    if (cfg.actions.actions.empty())
        throw std::invalid_argument("empty action set");
    const int n = env.nx;
    const int N = env.node_count();
    double delta = 1.0 / (n * std::sqrt(static_cast<double>(cfg.T)));
    Schedule sched = init_schedule(
        n, cfg.c0, cfg.T,
        kind == LrInit::TwoThirds ? ScheduleMode::TwoThirds
                                  : ScheduleMode::Sqrt);
    const long T0 = static_cast<long>(sched.rounds.size());
    if (cfg.T < T0)
        throw std::invalid_argument("horizon shorter than initialization");

    RandomStream rng(cfg.seed);
    RegretTrace trace;
    InitObservationLog log;
    log.schedule = sched;
    for (long t = 1; t <= T0; ++t) {
        const Intervention& a = sched.rounds[t - 1];
        Sample s = sample(env, a, rng);
        log.samples.push_back(s);
        TraceRow row;
        row.t = t;
        row.action = a;
        row.y = s.y();
        trace.rows.push_back(row);
    }
    AncestorRelation rel =
        cfg.oracle_relation
            ? transitive_closure(true_ancestor_relation(env))
            : (kind == LrInit::TwoThirds
                   ? nogap_blm_ancestors(log, cfg.c0, cfg.c1, cfg.T, N,
                                         cfg.scope)
                   : bglm_ancestors(log, cfg.c0, cfg.c1, cfg.T, N, cfg.scope));
    trace.relation = rel;

    EstimatedModel em = EstimatedModel::from_relation(rel, env.links);
    RegBank bank;
    bank.init(em, /*ridge=*/true);
    for (long t = 0; t < T0; ++t)
        bank.absorb(log.samples[t], sched.rounds[t]);

    for (long t = T0 + 1; t <= cfg.T; ++t) {
        if (cfg.oracle_theta) {
            feed_oracle_theta(env, em);
        } else {
            double rho_t =
                cfg.rho_scale * confidence_radius_lr(n, t - 1, delta);
            bank.estimate(em, rho_t, t, 1, nullptr);
        }
        OptimisticChoice c = optimistic_action(em, cfg.actions,
                                               cfg.oracle_paths,
                                               mix_seed(cfg.seed, t, 0xa3));
        play_and_record(env, c.action, c.index, t, rng, bank, trace);
    }
    compute_regret(env, cfg.actions, trace);
    return trace;
}

}  // namespace detail

inline RegretTrace run_blm_lr_unknown(const CausalModel& env,
                                      const RunConfig& cfg) {
    return detail::run_lr_core(env, cfg, detail::LrInit::TwoThirds);
}

inline RegretTrace run_blm_lr_unknown_sg(const CausalModel& env,
                                         const RunConfig& cfg) {
    return detail::run_lr_core(env, cfg, detail::LrInit::Sqrt);
}

inline RegretTrace run_bglm_ofu_unknown(const CausalModel& env,
                                        const RunConfig& cfg) {
    if (cfg.actions.actions.empty())
        throw std::invalid_argument("empty action set");
    const int n = env.nx;
    const int N = env.node_count();
    double delta = 1.0 / (3.0 * n * std::sqrt(static_cast<double>(cfg.T)));
    double rho = cfg.rho_scale *
                 confidence_radius_ofu(env.constants.kappa, delta);
    Schedule sched = init_schedule(n, cfg.c0, cfg.T, ScheduleMode::Sqrt);
    const long T0 = static_cast<long>(sched.rounds.size());
    long extra = cfg.skip_second_init
                     ? 0
                     : second_init_length(n, env.constants, delta);
    if (cfg.T < T0 + extra)
        throw std::invalid_argument("horizon shorter than initialization");

    RandomStream rng(cfg.seed);
    RegretTrace trace;
    InitObservationLog log;
    log.schedule = sched;
    for (long t = 1; t <= T0; ++t) {
        const Intervention& a = sched.rounds[t - 1];
        Sample s = sample(env, a, rng);
        log.samples.push_back(s);
        TraceRow row;
        row.t = t;
        row.action = a;
        row.y = s.y();
        trace.rows.push_back(row);
    }
    AncestorRelation rel =
        cfg.oracle_relation
            ? transitive_closure(true_ancestor_relation(env))
            : bglm_ancestors(log, cfg.c0, cfg.c1, cfg.T, N, cfg.scope);
    trace.relation = rel;

    EstimatedModel em = EstimatedModel::from_relation(rel, env.links);
    detail::RegBank bank;
    bank.init(em, /*ridge=*/false);
    for (long t = 0; t < T0; ++t)
        bank.absorb(log.samples[t], sched.rounds[t]);

    for (long t = T0 + 1; t <= T0 + extra; ++t)
        detail::play_and_record(env, Intervention::null(), -1, t, rng, bank,
                                trace);

    std::vector<Vec> glm_cache(N);
    for (long t = T0 + extra + 1; t <= cfg.T; ++t) {
        if (cfg.oracle_theta)
            detail::feed_oracle_theta(env, em);
        else
            bank.estimate(em, rho, t, cfg.refit_every, &glm_cache);
        OptimisticChoice c = optimistic_action(em, cfg.actions,
                                               cfg.oracle_paths,
                                               mix_seed(cfg.seed, t, 0xb7));
        detail::play_and_record(env, c.action, c.index, t, rng, bank, trace);
    }
    compute_regret(env, cfg.actions, trace);
    return trace;
}

inline RegretTrace run_ucb_baseline(const CausalModel& env,
                                    const RunConfig& cfg) {
    const auto& arms = cfg.actions.actions;
    if (arms.empty()) throw std::invalid_argument("empty action set");
    RandomStream rng(cfg.seed);
    RegretTrace trace;
    std::vector<long> pulls(arms.size(), 0);
    std::vector<double> sums(arms.size(), 0.0);
    for (long t = 1; t <= cfg.T; ++t) {
        int pick = -1;
        if (t <= static_cast<long>(arms.size())) {
            pick = static_cast<int>(t - 1);
        } else {
            double best = -1.0;
            for (std::size_t i = 0; i < arms.size(); ++i) {
                double u = sums[i] / pulls[i] +
                           std::sqrt(std::log(static_cast<double>(t)) /
                                     pulls[i]);
                if (u > best) {
                    best = u;
                    pick = static_cast<int>(i);
                }
            }
        }
        Sample s = sample(env, arms[pick], rng);
        pulls[pick] += 1;
        sums[pick] += s.y();
        TraceRow row;
        row.t = t;
        row.action_id = pick;
        row.action = arms[pick];
        row.y = s.y();
        trace.rows.push_back(row);
    }
    compute_regret(env, cfg.actions, trace);
    return trace;
}

inline RegretTrace run_eps_greedy(const CausalModel& env,
                                  const RunConfig& cfg) {
    const auto& arms = cfg.actions.actions;
    if (arms.empty()) throw std::invalid_argument("empty action set");
    RandomStream rng(cfg.seed);
    RegretTrace trace;
    std::vector<long> pulls(arms.size(), 0);
    std::vector<double> sums(arms.size(), 0.0);
    for (long t = 1; t <= cfg.T; ++t) {
        int pick = -1;
        if (t <= static_cast<long>(arms.size())) {
            pick = static_cast<int>(t - 1);
        } else if (rng.uniform() < cfg.eps_greedy) {
            pick = static_cast<int>(rng.below(arms.size()));
        } else {
            double best = -1.0;
            for (std::size_t i = 0; i < arms.size(); ++i) {
                double m = sums[i] / pulls[i];
                if (m > best) {
                    best = m;
                    pick = static_cast<int>(i);
                }
            }
        }
        Sample s = sample(env, arms[pick], rng);
        pulls[pick] += 1;
        sums[pick] += s.y();
        TraceRow row;
        row.t = t;
        row.action_id = pick;
        row.action = arms[pick];
        row.y = s.y();
        trace.rows.push_back(row);
    }
    compute_regret(env, cfg.actions, trace);
    return trace;
}

}  // namespace ccb

#endif  // CCB_BANDIT_HPP
