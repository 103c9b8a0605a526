#ifndef CCB_ESTIMATION_HPP
#define CCB_ESTIMATION_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccb/linalg.hpp"
#include "ccb/link.hpp"
#include "ccb/model.hpp"
#include "ccb/reward.hpp"

namespace ccb {

// Regression rows for one node: V over the estimated ancestor coordinates
// (first coordinate is X1 and is always 1), x the node's observed value.
// Only rounds where the node was not intervened contribute rows.
struct NodeDataset {
    int dim = 0;
    std::vector<Vec> V;
    std::vector<double> x;

    explicit NodeDataset(int d = 0) : dim(d) {}

    void add(Vec v, double outcome) {
        if (static_cast<int>(v.size()) != dim)
            throw std::invalid_argument("row dimension mismatch");
        V.push_back(std::move(v));
        x.push_back(outcome);
    }
};

struct EllipsoidEstimate {
    Vec theta_hat;
    Mat M;
    double rho = 0.0;
    bool converged = true;
    double residual = 0.0;  // sup-norm of the estimating equation at theta_hat
};

struct RegressionState {
    Mat M;
    Vec b;
    Vec theta_hat;

    static RegressionState make(int dim) {
        RegressionState s;
        s.M = Mat::identity(dim);
        s.b.assign(dim, 0.0);
        s.theta_hat.assign(dim, 0.0);
        return s;
    }
};

inline RegressionState ridge_update(const RegressionState& state, const Vec& V,
                                    double x) {
    if (V.size() != state.b.size())
        throw std::invalid_argument("ridge_update dimension mismatch");
    RegressionState s = state;
    add_outer(s.M, V);
    axpy(s.b, x, V);
    s.theta_hat = solve_sym(s.M, s.b);
    return s;
}

namespace detail {

inline double mle_residual(const NodeDataset& data, const LinkFunction& link,
                           const Vec& theta) {
    Vec g(data.dim, 0.0);
    for (std::size_t i = 0; i < data.V.size(); ++i) {
        double r = data.x[i] - link.eval(dot(data.V[i], theta));
        axpy(g, r, data.V[i]);
    }
    double m = 0.0;
    for (double v : g) m = std::max(m, std::fabs(v));
    return m;
}

}  // namespace detail

// Maximum-likelihood fit of one node's parameters. The estimating equation
// sum_i (x_i - f(V_i' theta)) V_i = 0 is the gradient of a concave
// pseudo-likelihood, so damped Newton with step halving converges; the
// identity link reduces it to the normal equations and is solved directly
// (least-norm when the Gram matrix is singular).
inline EllipsoidEstimate mle_estimate(const NodeDataset& data,
                                      const LinkFunction& link) {
    EllipsoidEstimate est;
    est.M = Mat(data.dim);
    est.theta_hat.assign(data.dim, 0.0);
    for (const auto& v : data.V) add_outer(est.M, v);
    if (data.V.empty()) return est;

    if (link.kind == LinkKind::Identity) {
        Vec b(data.dim, 0.0);
        for (std::size_t i = 0; i < data.V.size(); ++i)
            axpy(b, data.x[i], data.V[i]);
        est.theta_hat = solve_sym(est.M, b);
        est.residual = detail::mle_residual(data, link, est.theta_hat);
        est.converged = est.residual <= 1e-8;
        return est;
    }

    // Damped Newton on the concave pseudo-likelihood; the line search
    // accepts a step once the estimating-equation sup-norm drops, which is
    // monotone along Newton directions of a concave objective.
    Vec theta(data.dim, 0.0);
    double cur = detail::mle_residual(data, link, theta);
    for (int it = 0; it < 200 && cur > 1e-8; ++it) {
        Vec g(data.dim, 0.0);
        Mat H(data.dim);
        for (std::size_t i = 0; i < data.V.size(); ++i) {
            double u = dot(data.V[i], theta);
            axpy(g, data.x[i] - link.eval(u), data.V[i]);
            double w = link.d1(u);
            for (int r = 0; r < data.dim; ++r)
                for (int c = 0; c < data.dim; ++c)
                    H(r, c) += w * data.V[i][r] * data.V[i][c];
        }
        Vec step = solve_sym(H, g);
        double alpha = 1.0;
        bool moved = false;
        for (int half = 0; half < 60; ++half) {
            Vec cand = theta;
            axpy(cand, alpha, step);
            double val = detail::mle_residual(data, link, cand);
            if (val < cur) {
                theta = cand;
                cur = val;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;  // stalled; report residual as-is
    }
    est.theta_hat = theta;
    est.residual = detail::mle_residual(data, link, theta);
    est.converged = est.residual <= 1e-8;
    return est;
}

// rho = (3/kappa) sqrt(ln(1/delta))
inline double confidence_radius_ofu(double kappa, double delta) {
    if (kappa <= 0.0 || delta <= 0.0 || delta >= 1.0)
        throw std::invalid_argument("confidence_radius_ofu domain");
    return 3.0 / kappa * std::sqrt(std::log(1.0 / delta));
}

// rho_t = sqrt(n ln(1 + t n) + 2 ln(1/delta)) + sqrt(n)
inline double confidence_radius_lr(int n, long t, double delta) {
    if (n < 1 || t < 0 || delta <= 0.0 || delta > 1.0)
        throw std::invalid_argument("confidence_radius_lr domain");
    double tn = static_cast<double>(t) * n;
    return std::sqrt(n * std::log1p(tn) + 2.0 * std::log(1.0 / delta)) +
           std::sqrt(static_cast<double>(n));
}

// Extra rounds of the second initialization phase (T1 - T0).
inline long second_init_length(int n, const ModelConstants& k, double delta) {
    if (delta <= 0.0 || delta > 1.0)
        throw std::invalid_argument("second_init_length domain");
    double ln1d = std::log(1.0 / delta);
    double R = std::ceil(512.0 * n * k.L2_max * k.L2_max /
                         std::pow(k.kappa, 4.0) * (n * n + ln1d));
    double len = std::max(k.c_lm / (k.zeta * k.zeta) * ln1d,
                          (8.0 * n * n - 6.0) * R / k.zeta);
    return static_cast<long>(std::ceil(len));
}

// Transformed target theta*' for a node regressed on coordinates `coords`
// (coords[0] must be X1): true-parent weights kept where the parent is a
// coordinate; weights of dropped parents contribute weight * E[parent]
// (observational) to the X1 coordinate.
inline Vec theta_prime(const CausalModel& m, int node,
                       const std::vector<int>& coords) {
    if (coords.empty() || coords[0] != 0)
        throw std::invalid_argument("coords must start with X1");
    Vec out(coords.size(), 0.0);
    const auto& pa = m.parents[node];
    const auto& w = m.weights[node];
    for (std::size_t k = 0; k < pa.size(); ++k) {
        std::size_t pos = coords.size();
        for (std::size_t c = 0; c < coords.size(); ++c)
            if (coords[c] == pa[k]) { pos = c; break; }
        if (pos < coords.size()) {
            out[pos] += w[k];
        } else {
            double mean = expected_value(m, Intervention::null(), pa[k],
                                         RewardMode::Enumerate);
            out[0] += w[k] * mean;
        }
    }
    return out;
}

}  // namespace ccb

#endif  // CCB_ESTIMATION_HPP
