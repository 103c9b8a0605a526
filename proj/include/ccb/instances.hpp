#ifndef CCB_INSTANCES_HPP
#define CCB_INSTANCES_HPP

#include <stdexcept>
#include <vector>

#include "ccb/model.hpp"
#include "ccb/rng.hpp"

namespace ccb {

// The 7-node parallel BLM of Appendix E. Indices: 0=X1, 1..5=X2..X6, 6=Y.
inline CausalModel appendix_e_instance() {
    CausalModel m;
    m.nx = 6;
    m.parents.assign(7, {});
    m.weights.assign(7, {});
    m.links.assign(7, LinkFunction::identity());
    for (int i = 1; i <= 5; ++i) m.parents[i] = {0};
    m.weights[1] = {0.3};
    m.weights[2] = {0.3};
    m.weights[3] = {0.2};
    m.weights[4] = {0.2};
    m.weights[5] = {0.2};
    m.parents[6] = {1, 2, 3, 4, 5};
    m.weights[6] = {0.3, 0.3, 0.13, 0.13, 0.13};
    // Identity links: kappa = L1 = 1, L2 = 0. zeta: each X_i takes either
    // value with probability >= 0.2 regardless of the rest.
    m.constants.kappa = 1.0;
    m.constants.L1_max = 1.0;
    m.constants.L2_max = 0.0;
    m.constants.zeta = 0.2;
    m.validate();
    return m;
}

// Theorem 1 family: k parallel fair coins feeding a tabulated Y.
// Y is 0.5 + delta when all X are 0; instance `index` >= 1 additionally puts
// 0.5 + 2*delta on the pattern binary(index - 1).
inline CausalModel parallel_lower_bound_instance(int k, double delta,
                                                 int index = 0) {
    if (k < 1 || k > 20) throw std::invalid_argument("k in [1,20]");
    if (delta < 0.0 || 0.5 + 2.0 * delta > 1.0)
        throw std::invalid_argument("delta out of range");
    CausalModel m;
    m.nx = k + 1;
    int y = m.nx;
    m.parents.assign(y + 1, {});
    m.weights.assign(y + 1, {});
    m.links.assign(y + 1, LinkFunction::identity());
    for (int i = 1; i <= k; ++i) {
        m.parents[i] = {0};
        m.weights[i] = {0.5};
    }
    std::vector<int> ypar;
    for (int i = 1; i <= k; ++i) ypar.push_back(i);
    m.parents[y] = ypar;
    std::vector<double> cpt(std::size_t{1} << k, 0.5);
    cpt[0] = 0.5 + delta;
    if (index >= 1) {
        if (index > (1 << k)) throw std::invalid_argument("index too large");
        cpt[static_cast<std::size_t>(index - 1)] = 0.5 + 2.0 * delta;
    }
    m.links[y] = LinkFunction::tabulated(cpt);
    m.validate();
    return m;
}

// Appendix F.4 pure-exploration family, instance xi_2. Paper nodes map to
// indices: paper X2 -> 1, paper X1 -> 2, paper X3..Xk -> 3..k, Y -> k+1.
// Y deterministically copies paper X1. All marginals are 0.5.
inline CausalModel pe_lower_bound_instance(int k, double eps) {
    if (k < 2 || k > 18) throw std::invalid_argument("k in [2,18]");
    if (eps < 0.0 || 4.0 * eps > 0.5)
        throw std::invalid_argument("eps out of range");
    CausalModel m;
    m.nx = k + 1;  // always-1 node plus the k paper nodes
    int y = m.nx;
    m.parents.assign(y + 1, {});
    m.weights.assign(y + 1, {});
    m.links.assign(y + 1, LinkFunction::identity());
    // paper X2: fair coin.
    m.parents[1] = {0};
    m.links[1] = LinkFunction::tabulated({0.0, 0.5});
    // paper X1 given paper X2: 0.5 + eps when equal.
    m.parents[2] = {1};
    m.links[2] = LinkFunction::tabulated({0.5 - eps, 0.5 + eps});
    // paper X_i given paper X1: 0.5 + 4 eps when equal.
    for (int i = 3; i <= k; ++i) {
        m.parents[i] = {2};
        m.links[i] = LinkFunction::tabulated({0.5 - 4.0 * eps, 0.5 + 4.0 * eps});
    }
    // Y copies paper X1.
    m.parents[y] = {2};
    m.links[y] = LinkFunction::tabulated({0.0, 1.0});
    m.validate();
    return m;
}

// Random parallel-free BLM used by the oracle-equivalence and Lemma 2
// suites: random DAG on index order, X1 a parent of every node, weights
// scaled so each node's weight sum stays below 1.
inline CausalModel random_blm(int n_x, RandomStream& rng,
                              double edge_prob = 0.5) {
    CausalModel m;
    m.nx = n_x;
    int y = m.nx;
    m.parents.assign(y + 1, {});
    m.weights.assign(y + 1, {});
    m.links.assign(y + 1, LinkFunction::identity());
    for (int x = 1; x <= y; ++x) {
        std::vector<int> ps = {0};
        for (int p = 1; p < x; ++p)
            if (p != y && rng.uniform() < edge_prob) ps.push_back(p);
        std::vector<double> ws(ps.size());
        double sum = 0.0;
        for (auto& w : ws) {
            w = 0.05 + 0.95 * rng.uniform();
            sum += w;
        }
        double scale = (0.9 + 0.1 * rng.uniform()) / sum;
        for (auto& w : ws) w *= scale;
        m.parents[x] = ps;
        m.weights[x] = ws;
    }
    m.validate();
    return m;
}

}  // namespace ccb

#endif  // CCB_INSTANCES_HPP
