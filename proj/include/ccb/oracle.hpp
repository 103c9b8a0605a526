#ifndef CCB_ORACLE_HPP
#define CCB_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccb/discovery.hpp"
#include "ccb/estimation.hpp"
#include "ccb/linalg.hpp"
#include "ccb/model.hpp"
#include "ccb/rng.hpp"

namespace ccb {

// Graph estimate plus per-node ellipsoids. Each node X is regressed on the
// coordinates {X1} + Anc-hat(X) (ancestor completion: missing edges behave
// as zero-weight edges, so the ancestor set can stand in for the parent set).
struct EstimatedModel {
    AncestorRelation relation;
    std::vector<std::vector<int>> coords;  // per node, coords[node][0] == 0
    std::vector<EllipsoidEstimate> est;    // per node; node 0 unused
    std::vector<LinkFunction> links;       // per node

    int node_count() const { return relation.nodes; }

    bool all_identity() const {
        for (int x = 1; x < node_count(); ++x)
            if (links[x].kind != LinkKind::Identity) return false;
        return true;
    }

    static EstimatedModel from_relation(const AncestorRelation& rel,
                                        std::vector<LinkFunction> links) {
        EstimatedModel em;
        em.relation = rel;
        em.links = std::move(links);
        em.est.resize(rel.nodes);
        em.coords.resize(rel.nodes);
        for (int x = 1; x < rel.nodes; ++x) {
            em.coords[x].push_back(0);
            for (int p : rel.ancestors_of(x))
                if (p != x) em.coords[x].push_back(p);
        }
        return em;
    }
};

namespace detail {

inline double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

inline void check_dims(const EstimatedModel& em,
                       const std::vector<Vec>& theta) {
    if (static_cast<int>(theta.size()) != em.node_count())
        throw std::invalid_argument("theta count mismatch");
    for (int x = 1; x < em.node_count(); ++x)
        if (theta[x].size() != em.coords[x].size())
            throw std::invalid_argument("theta dimension mismatch");
}

}  // namespace detail

// E[Y | do(a)] on the estimated graph under fixed parameters. Identity
// links propagate means exactly; otherwise Monte-Carlo with `paths`
// replications seeded deterministically (common random numbers when the
// same seed is reused across actions).
inline double reward_under(const EstimatedModel& em,
                           const std::vector<Vec>& theta, const Intervention& a,
                           long paths = 10000, std::uint64_t seed = 1) {
    detail::check_dims(em, theta);
    const int N = em.node_count();
    if (em.all_identity()) {
        Vec mean(N, 0.0);
        mean[0] = 1.0;
        for (int x = 1; x < N; ++x) {
            if (a.is_set(x)) {
                mean[x] = a.value_of(x);
                continue;
            }
            double u = 0.0;
            for (std::size_t c = 0; c < em.coords[x].size(); ++c)
                u += theta[x][c] * mean[em.coords[x][c]];
            mean[x] = detail::clip01(em.links[x].eval(u));
        }
        return mean[N - 1];
    }
    RandomStream rng(seed);
    double acc = 0.0;
    std::vector<double> v(N, 0.0);
    for (long p = 0; p < paths; ++p) {
        v[0] = 1.0;
        for (int x = 1; x < N; ++x) {
            if (a.is_set(x)) {
                v[x] = a.value_of(x);
                continue;
            }
            double u = 0.0;
            for (std::size_t c = 0; c < em.coords[x].size(); ++c)
                u += theta[x][c] * v[em.coords[x][c]];
            double prob = detail::clip01(em.links[x].eval(u));
            v[x] = (rng.uniform() < prob) ? 1.0 : 0.0;
        }
        acc += v[N - 1];
    }
    return acc / paths;
}

struct OptimisticChoice {
    int index = -1;
    Intervention action;
    double value = 0.0;
    std::vector<Vec> theta;  // witness, clipped to the [0,1] box
};

namespace detail {

// Per-node optimistic success probability: UCB of the linear index clipped
// through the link. Singular directions get an infinite bonus (value 1).
inline double node_ucb(const EstimatedModel& em, int x, const Vec& V) {
    const EllipsoidEstimate& e = em.est[x];
    double base = dot(e.theta_hat, V);
    double bonus = 0.0;
    if (e.rho > 0.0) {
        double q = quad_form_inv(e.M, V);
        if (!std::isfinite(q)) return 1.0;
        bonus = e.rho * std::sqrt(q);
    }
    return clip01(em.links[x].eval(base + bonus));
}

inline Vec witness_theta(const EstimatedModel& em, int x, const Vec& V) {
    const EllipsoidEstimate& e = em.est[x];
    Vec t = e.theta_hat;
    double q = (e.rho > 0.0) ? quad_form_inv(e.M, V) : 0.0;
    if (e.rho > 0.0 && std::isfinite(q) && q > 0.0) {
        Vec dir = solve_sym(e.M, V);
        axpy(t, e.rho / std::sqrt(q), dir);
    }
    for (double& c : t) c = clip01(c);
    return t;
}

}  // namespace detail

// Optimistic value of one action: per-node UCBs propagated through the
// estimated DAG — exact mean propagation for identity links, Monte-Carlo
// over `uniforms` (paths x nodes, shared across actions for common random
// numbers) otherwise.
inline double optimistic_value(const EstimatedModel& em, const Intervention& a,
                               const std::vector<Vec>& uniforms = {}) {
    const int N = em.node_count();
    if (em.all_identity()) {
        Vec mean(N, 0.0);
        mean[0] = 1.0;
        for (int x = 1; x < N; ++x) {
            if (a.is_set(x)) {
                mean[x] = a.value_of(x);
                continue;
            }
            Vec V(em.coords[x].size());
            for (std::size_t c = 0; c < em.coords[x].size(); ++c)
                V[c] = mean[em.coords[x][c]];
            mean[x] = detail::node_ucb(em, x, V);
        }
        return mean[N - 1];
    }
    if (uniforms.empty())
        throw std::invalid_argument("MC oracle needs shared uniforms");
    double acc = 0.0;
    std::vector<double> v(N, 0.0);
    for (const Vec& u : uniforms) {
        v[0] = 1.0;
        for (int x = 1; x < N; ++x) {
            if (a.is_set(x)) {
                v[x] = a.value_of(x);
                continue;
            }
            Vec V(em.coords[x].size());
            for (std::size_t c = 0; c < em.coords[x].size(); ++c)
                V[c] = v[em.coords[x][c]];
            v[x] = (u[x] < detail::node_ucb(em, x, V)) ? 1.0 : 0.0;
        }
        acc += v[N - 1];
    }
    return acc / uniforms.size();
}

inline std::vector<Vec> oracle_uniforms(int node_count, long paths,
                                        std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<Vec> u(paths, Vec(node_count, 0.0));
    for (auto& row : u)
        for (double& c : row) c = rng.uniform();
    return u;
}

// Joint argmax over actions of the optimistic reward; ties broken toward
// the lowest action index.
inline OptimisticChoice optimistic_action(const EstimatedModel& em,
                                          const ActionSet& actions,
                                          long paths = 10000,
                                          std::uint64_t seed = 1) {
    if (actions.actions.empty())
        throw std::invalid_argument("empty action set");
    std::vector<Vec> uniforms;
    if (!em.all_identity())
        uniforms = oracle_uniforms(em.node_count(), paths, seed);
    OptimisticChoice best;
    for (std::size_t i = 0; i < actions.actions.size(); ++i) {
        double v = optimistic_value(em, actions.actions[i], uniforms);
        if (best.index < 0 || v > best.value) {
            best.index = static_cast<int>(i);
            best.action = actions.actions[i];
            best.value = v;
        }
    }
    // witness parameters at the chosen action's propagated means
    const int N = em.node_count();
    best.theta.assign(N, Vec());
    Vec mean(N, 0.0);
    mean[0] = 1.0;
    for (int x = 1; x < N; ++x) {
        Vec V(em.coords[x].size());
        for (std::size_t c = 0; c < em.coords[x].size(); ++c)
            V[c] = mean[em.coords[x][c]];
        best.theta[x] = detail::witness_theta(em, x, V);
        mean[x] = best.action.is_set(x) ? best.action.value_of(x)
                                        : detail::node_ucb(em, x, V);
    }
    return best;
}

}  // namespace ccb

#endif  // CCB_ORACLE_HPP
