#ifndef CCB_MODEL_HPP
#define CCB_MODEL_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccb/link.hpp"
#include "ccb/rng.hpp"

namespace ccb {

// Node indexing convention: 0 is the always-1 node X1, 1..nx-1 are X2..Xn,
// nx is the reward node Y. Index order is the topological order.

struct ModelConstants {
    double kappa = 1.0;
    double L1_max = 1.0;
    double L2_max = 0.0;
    double zeta = 1.0;
    double c_lm = 1.0;  // Lecue-Mendelson constant, never pinned by the paper
};

// do(S=s); empty assignment list encodes do().
struct Intervention {
    // (node, value) sorted by node id.
    std::vector<std::pair<int, int>> assign;

    static Intervention null() { return {}; }
    static Intervention atomic(int node, int value) {
        Intervention a;
        a.assign = {{node, value}};
        return a;
    }

    void set(int node, int value) {
        auto it = std::lower_bound(
            assign.begin(), assign.end(), node,
            [](const std::pair<int, int>& p, int v) { return p.first < v; });
        if (it != assign.end() && it->first == node) {
            it->second = value;
        } else {
            assign.insert(it, {node, value});
        }
    }

    bool is_set(int node) const {
        auto it = std::lower_bound(
            assign.begin(), assign.end(), node,
            [](const std::pair<int, int>& p, int v) { return p.first < v; });
        return it != assign.end() && it->first == node;
    }

    int value_of(int node) const {
        for (const auto& p : assign)
            if (p.first == node) return p.second;
        throw std::logic_error("node not intervened");
    }

    bool empty() const { return assign.empty(); }

    bool operator==(const Intervention& o) const { return assign == o.assign; }
};

struct ActionSet {
    std::vector<Intervention> actions;
};

struct Sample {
    // Values of X1..Xn followed by Y at index nx. Binary models store 0/1;
    // the continuous linear variant stores reals in [0,1].
    std::vector<double> v;

    double y() const { return v.back(); }
};

struct CausalModel {
    int nx = 0;  // number of X nodes including X1; Y has index nx
    std::vector<std::vector<int>> parents;   // per node, sorted ascending
    std::vector<std::vector<double>> weights;  // aligned with parents (GLM)
    std::vector<LinkFunction> links;
    std::vector<double> noise;  // truncated-uniform half-width per node
    bool continuous = false;    // linear model variant: real node values
    ModelConstants constants;

    int y_index() const { return nx; }
    int node_count() const { return nx + 1; }

    bool is_blm() const {
        for (const auto& l : links)
            if (l.kind != LinkKind::Identity) return false;
        return true;
    }

    bool is_glm() const {
        for (const auto& l : links)
            if (!l.is_glm()) return false;
        return true;
    }

    double weight(int parent, int child) const {
        const auto& ps = parents[child];
        for (std::size_t k = 0; k < ps.size(); ++k)
            if (ps[k] == parent) return weights[child][k];
        return 0.0;
    }

    bool has_edge(int parent, int child) const {
        const auto& ps = parents[child];
        return std::find(ps.begin(), ps.end(), parent) != ps.end();
    }

    int edge_count() const {
        int c = 0;
        for (const auto& ps : parents) c += static_cast<int>(ps.size());
        return c;
    }

    double theta_min() const {
        double m = 1.0;
        for (int x = 0; x < node_count(); ++x)
            for (double w : weights[x]) m = std::min(m, w);
        return m;
    }

    // P(node = 1 | parent values). `vals` holds values for all lower-indexed
    // nodes. X1 is deterministic 1.
    double cond_prob(int node, const std::vector<double>& vals) const {
        if (node == 0) return 1.0;
        const auto& ps = parents[node];
        const LinkFunction& f = links[node];
        if (f.kind == LinkKind::Tabulated) {
            std::size_t idx = 0;
            for (std::size_t k = 0; k < ps.size(); ++k)
                if (vals[ps[k]] >= 0.5) idx |= (std::size_t{1} << k);
            return f.table[idx];
        }
        double s = 0.0;
        for (std::size_t k = 0; k < ps.size(); ++k)
            s += weights[node][k] * vals[ps[k]];
        double p = f.base_eval(s);
        return std::min(1.0, std::max(0.0, p));
    }

    // True ancestor set (indices) of a node, by reachability over parents.
    std::vector<int> ancestors(int node) const {
        std::vector<char> mark(node_count(), 0);
        std::vector<int> stack = {node};
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int p : parents[u]) {
                if (!mark[p]) {
                    mark[p] = 1;
                    stack.push_back(p);
                }
            }
        }
        std::vector<int> out;
        for (int i = 0; i < node_count(); ++i)
            if (mark[i]) out.push_back(i);
        return out;
    }

    void validate() const {
        if (nx < 1) throw std::invalid_argument("model needs at least X1");
        if (static_cast<int>(parents.size()) != node_count() ||
            static_cast<int>(links.size()) != node_count())
            throw std::invalid_argument("model field sizes inconsistent");
        if (!parents[0].empty())
            throw std::invalid_argument("X1 cannot have parents");
        for (int x = 0; x < node_count(); ++x) {
            for (int p : parents[x]) {
                if (p >= x)
                    throw std::invalid_argument(
                        "parent indices must precede the child (topological "
                        "index order)");
                if (p == y_index())
                    throw std::invalid_argument("Y cannot have outgoing edges");
            }
            const LinkFunction& f = links[x];
            if (f.kind == LinkKind::Tabulated) {
                if (f.table.size() != (std::size_t{1} << parents[x].size()))
                    throw std::invalid_argument("CPT size mismatch");
                for (double p : f.table)
                    if (p < 0.0 || p > 1.0)
                        throw std::invalid_argument("CPT entry outside [0,1]");
            } else if (x > 0) {
                if (weights[x].size() != parents[x].size())
                    throw std::invalid_argument("weight/parent size mismatch");
                double sum = 0.0;
                for (double w : weights[x]) {
                    if (w < 0.0 || w > 1.0)
                        throw std::invalid_argument("weight outside [0,1]");
                    sum += w;
                }
                double nw = noise.empty() ? 0.0 : noise[x];
                if (f.kind == LinkKind::Identity && sum + nw > 1.0 + 1e-12)
                    throw std::invalid_argument(
                        "BLM weight sum plus noise exceeds 1");
            }
        }
    }

    void check_intervention(const Intervention& a) const {
        for (const auto& p : a.assign) {
            if (p.first <= 0 || p.first >= y_index())
                throw std::invalid_argument(
                    "interventions only on X2..Xn (not X1 or Y)");
            if (p.second != 0 && p.second != 1)
                throw std::invalid_argument("intervention values are binary");
        }
    }
};

inline Sample sample(const CausalModel& m, const Intervention& a,
                     RandomStream& rng) {
    m.check_intervention(a);
    Sample s;
    s.v.assign(m.node_count(), 0.0);
    for (int x = 0; x < m.node_count(); ++x) {
        if (x == 0) {
            s.v[0] = 1.0;
            continue;
        }
        if (x != m.y_index() && a.is_set(x)) {
            s.v[x] = a.value_of(x);
            continue;
        }
        double eps = 0.0;
        if (!m.noise.empty() && m.noise[x] > 0.0)
            eps = rng.uniform(-m.noise[x], m.noise[x]);
        if (m.continuous && m.links[x].kind == LinkKind::Identity) {
            double sum = 0.0;
            for (std::size_t k = 0; k < m.parents[x].size(); ++k)
                sum += m.weights[x][k] * s.v[m.parents[x][k]];
            s.v[x] = std::min(1.0, std::max(0.0, sum + eps));
        } else {
            double p = m.cond_prob(x, s.v) + eps;
            double gamma = rng.uniform();
            s.v[x] = (p >= gamma) ? 1.0 : 0.0;
        }
    }
    return s;
}

// do() plus all atomic interventions; the spec's baseline action set.
inline ActionSet null_and_atomic_actions(const CausalModel& m) {
    ActionSet as;
    as.actions.push_back(Intervention::null());
    for (int x = 1; x < m.y_index(); ++x)
        for (int v = 0; v <= 1; ++v)
            as.actions.push_back(Intervention::atomic(x, v));
    return as;
}

// All do(S=1) with |S| = budget over X2..Xn (Appendix E arm convention).
inline ActionSet all_ones_budget_actions(const CausalModel& m, int budget) {
    ActionSet as;
    std::vector<int> nodes;
    for (int x = 1; x < m.y_index(); ++x) nodes.push_back(x);
    std::vector<int> cur;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(cur.size()) == budget) {
            Intervention a;
            for (int n : cur) a.set(n, 1);
            as.actions.push_back(a);
            return;
        }
        for (std::size_t i = start; i < nodes.size(); ++i) {
            cur.push_back(nodes[i]);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return as;
}

}  // namespace ccb

#endif  // CCB_MODEL_HPP
