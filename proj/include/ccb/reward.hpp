#ifndef CCB_REWARD_HPP
#define CCB_REWARD_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccb/model.hpp"

namespace ccb {

enum class RewardMode { ExactLinear, Enumerate, MonteCarlo };

// Mean propagation in topological order; exact for identity links by
// linearity of expectation (holds under dependent parents too).
inline double exact_linear_value(const CausalModel& m, const Intervention& a,
                                 int target) {
    for (int x = 1; x <= target; ++x)
        if (m.links[x].kind != LinkKind::Identity)
            throw std::invalid_argument(
                "exact-linear mode requires identity links");
    std::vector<double> mean(m.node_count(), 0.0);
    mean[0] = 1.0;
    for (int x = 1; x <= target; ++x) {
        if (x != m.y_index() && a.is_set(x)) {
            mean[x] = a.value_of(x);
            continue;
        }
        double s = 0.0;
        for (std::size_t k = 0; k < m.parents[x].size(); ++k)
            s += m.weights[x][k] * mean[m.parents[x][k]];
        mean[x] = s;
    }
    return mean[target];
}

// Exact expectation of `target` by joint enumeration over the free nodes
// below it. Noise is zero-mean and truncated so that probabilities stay in
// [0,1], hence it never shifts conditional means and is ignored here.
inline double enumerate_value(const CausalModel& m, const Intervention& a,
                              int target) {
    if (m.nx > 20)
        throw std::invalid_argument("enumerate mode limited to n <= 20");
    std::vector<int> free_nodes;  // non-intervened X nodes in (0, target)
    for (int x = 1; x < target; ++x)
        if (!(x != m.y_index() && a.is_set(x))) free_nodes.push_back(x);

    std::vector<double> vals(m.node_count(), 0.0);
    vals[0] = 1.0;
    for (int x = 1; x < target; ++x)
        if (x != m.y_index() && a.is_set(x)) vals[x] = a.value_of(x);

    const std::size_t combos = std::size_t{1} << free_nodes.size();
    double total = 0.0;
    for (std::size_t bits = 0; bits < combos; ++bits) {
        for (std::size_t k = 0; k < free_nodes.size(); ++k)
            vals[free_nodes[k]] = (bits >> k) & 1 ? 1.0 : 0.0;
        double prob = 1.0;
        for (std::size_t k = 0; k < free_nodes.size() && prob > 0.0; ++k) {
            int x = free_nodes[k];
            double p1 = m.cond_prob(x, vals);
            prob *= (vals[x] >= 0.5) ? p1 : (1.0 - p1);
        }
        if (prob == 0.0) continue;
        double ptarget = (target != m.y_index() && a.is_set(target))
                             ? a.value_of(target)
                             : m.cond_prob(target, vals);
        total += prob * ptarget;
    }
    return total;
}

inline double monte_carlo_value(const CausalModel& m, const Intervention& a,
                                int target, long samples, RandomStream& rng) {
    double s = 0.0;
    for (long i = 0; i < samples; ++i) s += sample(m, a, rng).v[target];
    return s / static_cast<double>(samples);
}

inline double expected_value(const CausalModel& m, const Intervention& a,
                             int target, RewardMode mode) {
    m.check_intervention(a);
    switch (mode) {
        case RewardMode::ExactLinear:
            return exact_linear_value(m, a, target);
        case RewardMode::Enumerate:
            return enumerate_value(m, a, target);
        default:
            throw std::invalid_argument("monte-carlo needs rng + sample count");
    }
}

inline double expected_reward(const CausalModel& m, const Intervention& a,
                              RewardMode mode) {
    return expected_value(m, a, m.y_index(), mode);
}

// Lemma 2 probe: (E[X_j | do(X_i=1)], E[X_j | do(X_i=0)]).
inline std::pair<double, double> do_difference(const CausalModel& m, int i,
                                               int j,
                                               RewardMode mode =
                                                   RewardMode::Enumerate) {
    if (i == j || i == 0) throw std::invalid_argument("bad node pair");
    double hi = expected_value(m, Intervention::atomic(i, 1), j, mode);
    double lo = expected_value(m, Intervention::atomic(i, 0), j, mode);
    return {hi, lo};
}

}  // namespace ccb

#endif  // CCB_REWARD_HPP
