#ifndef CCB_DISCOVERY_HPP
#define CCB_DISCOVERY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccb/model.hpp"

namespace ccb {

enum class ScheduleMode { Sqrt, TwoThirds };

// Which pairs the threshold tests cover. AllPairs is the literal algorithm:
// test every ordered (X_i, X_j) pair and set anc(Y) = X by fiat. TargetOnly
// reproduces the Appendix E protocol: test only (X_i, Y) and take anc(Y)
// from the tests, leaving the X-X sets empty.
enum class DiscoveryScope { AllPairs, TargetOnly };

// Ancestor sets over node indices >= 1; X1 is implicitly an ancestor of
// everything and is re-added by the estimation layer as a coordinate.
struct AncestorRelation {
    int nodes = 0;
    std::vector<std::vector<char>> anc;  // anc[x][p] = 1: p in Anc-hat(x)

    explicit AncestorRelation(int node_count = 0)
        : nodes(node_count),
          anc(node_count, std::vector<char>(node_count, 0)) {}

    bool has(int ancestor, int node) const { return anc[node][ancestor] != 0; }
    void add(int ancestor, int node) { anc[node][ancestor] = 1; }

    std::vector<int> ancestors_of(int node) const {
        std::vector<int> out;
        for (int p = 1; p < nodes; ++p)
            if (anc[node][p]) out.push_back(p);
        return out;
    }

    bool operator==(const AncestorRelation& o) const { return anc == o.anc; }
};

// Smallest transitively-closed superset (Floyd-Warshall over the relation).
inline AncestorRelation transitive_closure(const AncestorRelation& rel) {
    AncestorRelation r = rel;
    const int n = r.nodes;
    for (int k = 1; k < n; ++k)
        for (int x = 1; x < n; ++x)
            if (r.anc[x][k])
                for (int p = 1; p < n; ++p)
                    if (r.anc[k][p]) r.anc[x][p] = 1;
    return r;
}

// True relation of a model, restricted to indices >= 1, for comparisons.
inline AncestorRelation true_ancestor_relation(const CausalModel& m) {
    AncestorRelation r(m.node_count());
    for (int x = 1; x < m.node_count(); ++x)
        for (int p : m.ancestors(x))
            if (p >= 1) r.add(p, x);
    return r;
}

struct Schedule {
    ScheduleMode mode = ScheduleMode::Sqrt;
    int n = 0;  // paper's n = |X|; intervened nodes are X2..Xn (indices 1..n-1)
    int block = 0;  // B, repetitions per (node, value) block
    std::vector<Intervention> rounds;
};

// Initialization-phase intervention sequence: for each X_i, a block of B
// rounds of do(X_i=1) then B of do(X_i=0). B = ceil(c0 sqrt(T)) in sqrt
// mode and ceil(c0 T^{2/3}) in two-thirds mode (single cycle; see notes on
// the log-factor discrepancy in the paper's Alg. 3).
inline Schedule init_schedule(int n, double c0, long T, ScheduleMode mode) {
    if (n < 2 || T < 1 || c0 <= 0.0)
        throw std::invalid_argument("init_schedule: bad parameters");
    double scale = (mode == ScheduleMode::Sqrt)
                       ? std::sqrt(static_cast<double>(T))
                       : std::pow(static_cast<double>(T), 2.0 / 3.0);
    Schedule s;
    s.mode = mode;
    s.n = n;
    s.block = static_cast<int>(std::ceil(c0 * scale));
    for (int i = 1; i < n; ++i)
        for (int v = 1; v >= 0; --v)
            for (int b = 0; b < s.block; ++b)
                s.rounds.push_back(Intervention::atomic(i, v));
    return s;
}

struct InitObservationLog {
    Schedule schedule;
    std::vector<Sample> samples;  // aligned with schedule.rounds
};

inline InitObservationLog run_init_schedule(const CausalModel& m,
                                            const Schedule& s,
                                            RandomStream& rng) {
    InitObservationLog log;
    log.schedule = s;
    log.samples.reserve(s.rounds.size());
    for (const auto& a : s.rounds) log.samples.push_back(sample(m, a, rng));
    return log;
}

namespace detail {

// Shared threshold test: node X_i is declared an ancestor of target when the
// paired sum of target differences under do(X_i=1) vs do(X_i=0) exceeds the
// threshold strictly (ties are not ancestors).
inline AncestorRelation ancestors_from_log(const InitObservationLog& log,
                                           double threshold,
                                           DiscoveryScope scope,
                                           int node_count) {
    const Schedule& s = log.schedule;
    if (log.samples.size() != s.rounds.size())
        throw std::invalid_argument("log shape mismatch with schedule");
    const int y = node_count - 1;
    AncestorRelation rel(node_count);
    for (int i = 1; i < s.n; ++i) {
        std::size_t base1 = static_cast<std::size_t>(i - 1) * 2 * s.block;
        std::size_t base0 = base1 + s.block;
        std::vector<int> targets;
        if (scope == DiscoveryScope::TargetOnly) {
            targets.push_back(y);
        } else {
            for (int j = 1; j < y; ++j)
                if (j != i) targets.push_back(j);
        }
        for (int j : targets) {
            double sum = 0.0;
            for (int k = 0; k < s.block; ++k)
                sum += log.samples[base1 + k].v[j] - log.samples[base0 + k].v[j];
            if (sum > threshold) rel.add(i, j);
        }
    }
    if (scope == DiscoveryScope::AllPairs) {
        // Alg. 2 fiat: every X node is treated as an ancestor of Y.
        for (int p = 1; p < y; ++p) rel.add(p, y);
    }
    return rel;
}

}  // namespace detail

// Algorithm 2 threshold test on a sqrt-mode log: sum > c0 c1 T^{3/10}.
inline AncestorRelation bglm_ancestors(const InitObservationLog& log, double c0,
                                       double c1, long T, int node_count,
                                       DiscoveryScope scope =
                                           DiscoveryScope::AllPairs) {
    if (log.schedule.mode != ScheduleMode::Sqrt)
        throw std::invalid_argument("bglm_ancestors needs a sqrt-mode log");
    double threshold = c0 * c1 * std::pow(static_cast<double>(T), 0.3);
    return transitive_closure(
        detail::ancestors_from_log(log, threshold, scope, node_count));
}

// Algorithm 4 threshold test on a two-thirds log: sum > c0 c1 T^{1/3} ln(T^2).
inline AncestorRelation nogap_blm_ancestors(const InitObservationLog& log,
                                            double c0, double c1, long T,
                                            int node_count,
                                            DiscoveryScope scope =
                                                DiscoveryScope::AllPairs) {
    if (log.schedule.mode != ScheduleMode::TwoThirds)
        throw std::invalid_argument(
            "nogap_blm_ancestors needs a two-thirds-mode log");
    double threshold = c0 * c1 * std::pow(static_cast<double>(T), 1.0 / 3.0) *
                       std::log(static_cast<double>(T) * static_cast<double>(T));
    return transitive_closure(
        detail::ancestors_from_log(log, threshold, scope, node_count));
}

}  // namespace ccb

#endif  // CCB_DISCOVERY_HPP
