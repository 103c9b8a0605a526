#ifndef CCB_PURE_EXPLORE_HPP
#define CCB_PURE_EXPLORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ccb/model.hpp"
#include "ccb/reward.hpp"
#include "ccb/rng.hpp"

namespace ccb {

// Skeleton with partially known orientations. An undirected entry means the
// edge exists but its direction is unknown; some orientation of the
// undirected edges yields the true DAG.
struct EssentialGraph {
    int nodes = 0;
    std::vector<std::vector<char>> undirected;  // symmetric
    std::vector<std::vector<char>> directed;    // directed[u][v]: u -> v

    explicit EssentialGraph(int node_count = 0)
        : nodes(node_count),
          undirected(node_count, std::vector<char>(node_count, 0)),
          directed(node_count, std::vector<char>(node_count, 0)) {}

    void add_undirected(int u, int v) {
        undirected[u][v] = undirected[v][u] = 1;
    }

    void orient(int u, int v) {  // establish u -> v
        undirected[u][v] = undirected[v][u] = 0;
        directed[u][v] = 1;
    }

    bool oriented_around(int x) const {
        for (int v = 0; v < nodes; ++v)
            if (undirected[x][v]) return false;
        return true;
    }

    std::vector<int> parents_of(int x) const {  // oriented in-neighbors, no X1
        std::vector<int> out;
        for (int u = 1; u < nodes; ++u)
            if (directed[u][x]) out.push_back(u);
        return out;
    }

    // Skeleton of a model: X1 edges come pre-oriented (X1 is the constant
    // root), everything else starts undirected.
    static EssentialGraph skeleton_of(const CausalModel& m) {
        EssentialGraph eg(m.node_count());
        for (int x = 1; x < m.node_count(); ++x)
            for (int p : m.parents[x]) {
                if (p == 0)
                    eg.directed[0][x] = 1;
                else
                    eg.add_undirected(p, x);
            }
        return eg;
    }

    // Fully oriented graph (for the known-structure baseline setting).
    static EssentialGraph oriented_of(const CausalModel& m) {
        EssentialGraph eg(m.node_count());
        for (int x = 1; x < m.node_count(); ++x)
            for (int p : m.parents[x]) eg.directed[p][x] = 1;
        return eg;
    }
};

struct ArmInfo {
    Intervention action;
    int node = -1;  // -1 for do()
    int value = 0;
};

inline std::vector<ArmInfo> default_pe_arms(const CausalModel& m) {
    std::vector<ArmInfo> arms;
    arms.push_back({Intervention::null(), -1, 0});
    for (int x = 1; x < m.y_index(); ++x)
        for (int v = 0; v <= 1; ++v)
            arms.push_back({Intervention::atomic(x, v), x, v});
    return arms;
}

// beta_O = sqrt((12/T_a) ln(16 n^2 Z_a t^3 / delta))
inline double obs_confidence(long T_a, int n, long Z_a, long t, double delta) {
    if (T_a < 1 || t < 1 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("obs_confidence domain");
    double arg = 16.0 * n * n * Z_a * std::pow(static_cast<double>(t), 3.0) /
                 delta;
    return std::sqrt(12.0 / T_a * std::log(arg));
}

// beta_I = 2 sqrt((1/D) ln(2 n ln(2t) / delta))
inline double int_confidence(long D, long t, int n, double delta) {
    if (D < 1 || t < 1 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("int_confidence domain");
    double arg = 2.0 * n * std::log(2.0 * static_cast<double>(t)) / delta;
    return 2.0 * std::sqrt(std::log(arg) / D);
}

// identification radius: sqrt((2/D) ln(4 n^2 t^2 / delta))
inline double ident_confidence(long D, long t, int n, double delta) {
    if (D < 1 || t < 1) return std::numeric_limits<double>::infinity();
    double arg = 4.0 * n * n * static_cast<double>(t) *
                 static_cast<double>(t) / delta;
    return std::sqrt(2.0 / D * std::log(arg));
}

// do-calculus point estimate and radius from per-configuration counts:
// T_z = #{X=x, P=z}, Y1_z = #{X=x, P=z, Y=1}, P_z = #{P=z}; t observations.
inline std::pair<double, double> do_calculus_estimate(
    const std::vector<long>& T_z, const std::vector<long>& Y1_z,
    const std::vector<long>& P_z, long t, int n, double delta) {
    const long Z = static_cast<long>(T_z.size());
    double mu = 0.0;
    long T_a = std::numeric_limits<long>::max();
    for (long z = 0; z < Z; ++z) {
        T_a = std::min(T_a, T_z[z]);
        if (T_z[z] > 0)
            mu += static_cast<double>(Y1_z[z]) / T_z[z] *
                  (static_cast<double>(P_z[z]) / t);
    }
    if (T_a < 1)
        return {mu, std::numeric_limits<double>::infinity()};
    return {mu, obs_confidence(T_a, n, Z, t, delta)};
}

// LUCB pick over (midpoint estimate, upper bound) pairs; lexicographic ties.
inline std::pair<int, int> lucb_select(const std::vector<double>& mu,
                                       const std::vector<double>& U) {
    if (mu.size() < 2 || mu.size() != U.size())
        throw std::invalid_argument("lucb_select needs >= 2 arms");
    int h = 0;
    for (int i = 1; i < static_cast<int>(mu.size()); ++i)
        if (mu[i] > mu[h]) h = i;
    int l = -1;
    for (int i = 0; i < static_cast<int>(U.size()); ++i) {
        if (i == h) continue;
        if (l < 0 || U[i] > U[l]) l = i;
    }
    return {h, l};
}

struct GapDiagnostics {
    std::vector<double> gaps;   // Delta_a in input order
    std::vector<double> H;      // H_r, 1-indexed conceptually (H[0] = H_1)
    int m = 0;                  // gap-dependent observation threshold
    std::vector<int> S;         // hard-to-observe arm indices
};

// Def. 1 scan: sort by q max{Delta, eps/2}^2, prefix-sum the inverse
// squared gaps, take the smallest tau whose below-threshold set fits in tau.
inline GapDiagnostics gap_threshold(const std::vector<double>& q,
                                    const std::vector<double>& gaps,
                                    double eps) {
    const int A = static_cast<int>(q.size());
    if (gaps.size() != q.size())
        throw std::invalid_argument("gap_threshold size mismatch");
    GapDiagnostics d;
    d.gaps = gaps;
    std::vector<double> key(A), inv(A);
    std::vector<int> order(A);
    for (int i = 0; i < A; ++i) {
        double g = std::max(gaps[i], eps / 2.0);
        key[i] = q[i] * g * g;
        inv[i] = 1.0 / (g * g);
        order[i] = i;
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return key[a] < key[b]; });
    d.H.resize(A);
    double acc = 0.0;
    for (int r = 0; r < A; ++r) {
        acc += inv[order[r]];
        d.H[r] = acc;
    }
    for (int tau = 0; tau <= A; ++tau) {
        double thresh = tau == 0 ? std::numeric_limits<double>::infinity()
                                 : 1.0 / d.H[tau - 1];
        int count = 0;
        for (int i = 0; i < A; ++i)
            if (key[i] < thresh) ++count;
        if (count <= tau) {
            d.m = tau;
            break;
        }
    }
    if (d.m > 0) {
        double thresh = 1.0 / d.H[d.m - 1];
        for (int i = 0; i < A; ++i)
            if (key[i] < thresh) d.S.push_back(i);
    }
    return d;
}

struct ArmState {
    long D = 0;          // interventional sample count
    double ySum = 0.0;   // sum of Y over interventional samples
    bool known = false;  // parent set resolved (all incident edges oriented)
    std::vector<long> Tz, Y1z;  // observational counts, size Z_a
    double L = 0.0, U = 1.0, mu = 0.5;
};

struct PEConfig {
    double eps = 0.05;
    double delta = 0.05;
    long cap = 10000000;
    std::uint64_t seed = 1;
    bool use_observational = true;  // false: pure-LUCB baseline
    std::vector<ArmInfo> arms;      // empty: default atomic arms + do()
    std::function<void(long, const std::vector<ArmState>&)> on_round;
};

struct PEResult {
    int arm_index = -1;
    long samples_used = 0;
    long rounds = 0;
    bool certified = false;
    std::vector<ArmState> arms;
    EssentialGraph graph;
};

namespace detail {

struct NodeDo {  // per (node, value): interventional tallies
    long d = 0;
    std::vector<long> ones;  // per node: count of value 1 under this do
};

struct KnownNode {
    std::vector<int> parents;  // excludes X1 (always 1, carries no bits)
    std::vector<long> pz;      // configuration counts over all observations
};

struct PEState {
    const CausalModel* env = nullptr;
    EssentialGraph eg;
    PEConfig cfg;
    int n = 0;  // node count
    long t = 0;
    long samples = 0;
    RandomStream rng{1};
    std::vector<ArmInfo> arms;
    std::vector<ArmState> stat;
    std::vector<std::array<NodeDo, 2>> nodo;  // per node
    std::vector<KnownNode> known_nodes;       // per node; empty until join
    std::vector<char> node_known;
    std::vector<std::uint64_t> buffer;  // packed observations, bit i = node i
    double obsYSum = 0.0;

    std::uint64_t pack(const Sample& s) const {
        std::uint64_t bits = 0;
        for (int i = 0; i < n; ++i)
            if (s.v[i] >= 0.5) bits |= (1ull << i);
        return bits;
    }

    long config_of(std::uint64_t bits, const std::vector<int>& parents) const {
        long z = 0;
        for (std::size_t k = 0; k < parents.size(); ++k)
            if (bits & (1ull << parents[k])) z |= (1l << k);
        return z;
    }
};

inline void join_known(PEState& st, int node) {
    st.node_known[node] = 1;
    KnownNode kn;
    kn.parents = st.eg.parents_of(node);
    long Z = 1l << kn.parents.size();
    kn.pz.assign(Z, 0);
    std::vector<std::vector<long>> Tz(2, std::vector<long>(Z, 0));
    std::vector<std::vector<long>> Y1z(2, std::vector<long>(Z, 0));
    const int y = st.n - 1;
    for (std::uint64_t bits : st.buffer) {
        long z = st.config_of(bits, kn.parents);
        kn.pz[z] += 1;
        int xv = (bits >> node) & 1;
        Tz[xv][z] += 1;
        if ((bits >> y) & 1) Y1z[xv][z] += 1;
    }
    st.known_nodes[node] = kn;
    for (std::size_t a = 0; a < st.arms.size(); ++a) {
        if (st.arms[a].node != node) continue;
        st.stat[a].known = true;
        st.stat[a].Tz = Tz[st.arms[a].value];
        st.stat[a].Y1z = Y1z[st.arms[a].value];
    }
}

inline void maybe_join(PEState& st, int node) {
    if (node <= 0 || node >= st.n - 1) return;
    if (!st.node_known[node] && st.eg.oriented_around(node))
        join_known(st, node);
}

// Orientation pass for `node` against all its undirected neighbors, using
// the identification bounds on P(neighbor = 1 | do(node = x)). Disjoint
// intervals across x = 0, 1 orient node -> neighbor; never retracted.
inline void try_orient(PEState& st, int node) {
    const NodeDo& d0 = st.nodo[node][0];
    const NodeDo& d1 = st.nodo[node][1];
    if (d0.d < 1 || d1.d < 1) return;
    double b0 = ident_confidence(d0.d, st.t, st.n, st.cfg.delta);
    double b1 = ident_confidence(d1.d, st.t, st.n, st.cfg.delta);
    for (int v = 0; v < st.n; ++v) {
        if (!st.eg.undirected[node][v]) continue;
        double p0 = static_cast<double>(d0.ones[v]) / d0.d;
        double p1 = static_cast<double>(d1.ones[v]) / d1.d;
        bool disjoint = (p0 + b0 < p1 - b1) || (p1 + b1 < p0 - b0);
        if (disjoint) {
            st.eg.orient(node, v);
            maybe_join(st, node);
            maybe_join(st, v);
        }
    }
}

inline void do_pair(PEState& st, int node) {
    for (int v = 0; v <= 1; ++v) {
        Sample s = sample(*st.env, Intervention::atomic(node, v), st.rng);
        st.samples += 1;
        NodeDo& nd = st.nodo[node][v];
        if (nd.ones.empty()) nd.ones.assign(st.n, 0);
        nd.d += 1;
        for (int i = 0; i < st.n; ++i)
            if (s.v[i] >= 0.5) nd.ones[i] += 1;
        for (std::size_t a = 0; a < st.arms.size(); ++a)
            if (st.arms[a].node == node && st.arms[a].value == v) {
                st.stat[a].D += 1;
                st.stat[a].ySum += s.y();
            }
    }
    try_orient(st, node);
}

inline void recover_edge(PEState& st, int arm_index) {
    const ArmInfo& a = st.arms[arm_index];
    if (a.node < 0) return;  // do(): no-op
    do_pair(st, a.node);
    // one undirected intervenable neighbor, fewest identification samples
    int pick = -1;
    long best = std::numeric_limits<long>::max();
    for (int v = 1; v < st.n - 1; ++v) {
        if (!st.eg.undirected[a.node][v]) continue;
        long cnt = st.nodo[v][0].d + st.nodo[v][1].d;
        if (cnt < best) {
            best = cnt;
            pick = v;
        }
    }
    if (pick >= 0) do_pair(st, pick);
}

inline void update_bounds(PEState& st) {
    for (std::size_t a = 0; a < st.arms.size(); ++a) {
        ArmState& s = st.stat[a];
        const ArmInfo& info = st.arms[a];
        double lo = 0.0, uo = 1.0;
        bool have_obs = false;
        double muO = 0.0, betaO = 0.0;
        if (st.cfg.use_observational && st.t >= 1) {
            if (info.node < 0) {
                muO = st.obsYSum / st.t;
                betaO = obs_confidence(st.t, st.n, 1, st.t, st.cfg.delta);
                have_obs = true;
            } else if (s.known) {
                const KnownNode& kn = st.known_nodes[info.node];
                auto [m, b] = do_calculus_estimate(s.Tz, s.Y1z, kn.pz, st.t,
                                                   st.n, st.cfg.delta);
                if (std::isfinite(b)) {
                    muO = m;
                    betaO = b;
                    have_obs = true;
                }
            }
        }
        if (have_obs) {
            lo = muO - betaO;
            uo = muO + betaO;
        } else {
            lo = -std::numeric_limits<double>::infinity();
            uo = std::numeric_limits<double>::infinity();
        }
        double li = -std::numeric_limits<double>::infinity();
        double ui = std::numeric_limits<double>::infinity();
        if (s.D >= 1 && st.t >= 1) {
            double muI = s.ySum / s.D;
            double betaI = int_confidence(s.D, st.t, st.n, st.cfg.delta);
            li = muI - betaI;
            ui = muI + betaI;
        }
        double L = std::max({0.0, lo, li});
        double U = std::min({1.0, uo, ui});
        if (L > U) {  // tiny-probability conflict: collapse to the overlap
            double mid = 0.5 * (L + U);
            L = U = mid;
        }
        s.L = L;
        s.U = U;
        s.mu = 0.5 * (L + U);
    }
}

}  // namespace detail

// Algorithm: LUCB over the final bounds; each round one observation feeds
// the do-calculus estimates of structure-resolved arms, and the two LUCB
// picks trigger edge-recovery interventions. Returns an eps-optimal arm
// with probability >= 1 - 4 delta when it stops before the sample cap.
inline PEResult causal_pe_unknown(const CausalModel& env,
                                  const EssentialGraph& eg,
                                  const PEConfig& cfg) {
    if (cfg.eps <= 0.0 || cfg.delta <= 0.0 || cfg.delta >= 1.0)
        throw std::invalid_argument("causal_pe_unknown domain");
    detail::PEState st;
    st.env = &env;
    st.eg = eg;
    st.cfg = cfg;
    st.n = env.node_count();
    st.rng = RandomStream(cfg.seed);
    st.arms = cfg.arms.empty() ? default_pe_arms(env) : cfg.arms;
    st.stat.assign(st.arms.size(), ArmState{});
    st.nodo.assign(st.n, std::array<detail::NodeDo, 2>{});
    st.known_nodes.assign(st.n, detail::KnownNode{});
    st.node_known.assign(st.n, 0);
    for (int x = 1; x < st.n - 1; ++x) detail::maybe_join(st, x);

    PEResult res;
    res.graph = st.eg;
    const int y = st.n - 1;
    while (true) {
        st.t += 1;
        std::vector<double> mu(st.arms.size()), U(st.arms.size());
        for (std::size_t a = 0; a < st.arms.size(); ++a) {
            mu[a] = st.stat[a].mu;
            U[a] = st.stat[a].U;
        }
        auto [h, l] = lucb_select(mu, U);
        if (st.stat[l].U <= st.stat[h].L + cfg.eps) {
            res.arm_index = h;
            res.certified = true;
            break;
        }
        if (st.samples >= cfg.cap) {
            res.arm_index = h;
            res.certified = false;
            break;
        }
        if (cfg.use_observational) {
            Sample s = sample(env, Intervention::null(), st.rng);
            st.samples += 1;
            std::uint64_t bits = st.pack(s);
            st.buffer.push_back(bits);
            st.obsYSum += s.y();
            for (int node = 1; node < y; ++node) {
                if (!st.node_known[node]) continue;
                detail::KnownNode& kn = st.known_nodes[node];
                long z = st.config_of(bits, kn.parents);
                kn.pz[z] += 1;
                int xv = (bits >> node) & 1;
                for (std::size_t a = 0; a < st.arms.size(); ++a)
                    if (st.arms[a].node == node && st.arms[a].value == xv) {
                        st.stat[a].Tz[z] += 1;
                        if ((bits >> y) & 1) st.stat[a].Y1z[z] += 1;
                    }
            }
            detail::recover_edge(st, h);
            detail::recover_edge(st, l);
        } else {
            // pure-LUCB baseline: sample the two picked arms directly
            for (int arm : {h, l}) {
                Sample s = sample(env, st.arms[arm].action, st.rng);
                st.samples += 1;
                st.stat[arm].D += 1;
                st.stat[arm].ySum += s.y();
            }
        }
        detail::update_bounds(st);
        if (cfg.on_round) cfg.on_round(st.t, st.stat);
    }
    res.samples_used = st.samples;
    res.rounds = st.t;
    res.arms = st.stat;
    res.graph = st.eg;
    return res;
}

}  // namespace ccb

#endif  // CCB_PURE_EXPLORE_HPP
