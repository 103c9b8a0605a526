#ifndef CCB_LINALG_HPP
#define CCB_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

// Minimal dense linear algebra for symmetric matrices of dimension <= ~20.
// Row-major storage; everything by value, sizes are tiny.

namespace ccb {

using Vec = std::vector<double>;

struct Mat {
    std::size_t n = 0;
    std::vector<double> a;  // row-major n*n

    Mat() = default;
    explicit Mat(std::size_t dim, double diag = 0.0) : n(dim), a(dim * dim, 0.0) {
        for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = diag;
    }
    double& operator()(std::size_t i, std::size_t j) { return a[i * n + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    static Mat identity(std::size_t dim) { return Mat(dim, 1.0); }
};

inline void add_outer(Mat& m, const Vec& v) {
    for (std::size_t i = 0; i < m.n; ++i) {
        if (v[i] == 0.0) continue;
        for (std::size_t j = 0; j < m.n; ++j) m(i, j) += v[i] * v[j];
    }
}

inline void axpy(Vec& y, double alpha, const Vec& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec matvec(const Mat& m, const Vec& v) {
    Vec r(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.n; ++j) s += m(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

// Jacobi eigendecomposition of a symmetric matrix: m = Q diag(w) Q^T.
inline void jacobi_eigen(const Mat& m, Mat& q, Vec& w) {
    const std::size_t n = m.n;
    Mat a = m;
    q = Mat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t r = p + 1; r < n; ++r) {
                if (std::fabs(a(p, r)) < 1e-300) continue;
                double theta = (a(r, r) - a(p, p)) / (2.0 * a(p, r));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }
    w.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) w[i] = a(i, i);
}

// Least-norm solve of the (possibly singular) symmetric system m x = b
// via eigendecomposition pseudo-inverse.
inline Vec pinv_solve(const Mat& m, const Vec& b) {
    Mat q;
    Vec w;
    jacobi_eigen(m, q, w);
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::fabs(v));
    double cutoff = wmax * 1e-12;
    Vec qtb(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m.n; ++k) s += q(k, i) * b[k];
        qtb[i] = (std::fabs(w[i]) > cutoff && cutoff > 0.0) ? s / w[i] : 0.0;
    }
    Vec x(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < m.n; ++k) s += q(i, k) * qtb[k];
        x[i] = s;
    }
    return x;
}

// Cholesky solve for positive-definite m; falls back to pinv when not PD.
inline bool cholesky(const Mat& m, Mat& l) {
    const std::size_t n = m.n;
    l = Mat(n);
    double dmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) dmax = std::max(dmax, std::fabs(m(i, i)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                // relative pivot floor: treat near-singular as not PD so the
                // caller falls back to the least-norm route
                if (s <= dmax * 1e-10) return false;
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    return true;
}

inline Vec chol_solve(const Mat& l, const Vec& b) {
    const std::size_t n = l.n;
    Vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    Vec x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

inline Vec solve_sym(const Mat& m, const Vec& b) {
    Mat l;
    if (cholesky(m, l)) return chol_solve(l, b);
    return pinv_solve(m, b);
}

// v^T M^{-1} v for symmetric positive-definite M; returns +inf when M is
// singular in the direction of v (unexplored direction => unbounded bonus).
inline double quad_form_inv(const Mat& m, const Vec& v) {
    Mat l;
    if (cholesky(m, l)) return dot(v, chol_solve(l, v));
    Mat q;
    Vec w;
    jacobi_eigen(m, q, w);
    double wmax = 0.0;
    for (double x : w) wmax = std::max(wmax, std::fabs(x));
    double cutoff = wmax * 1e-12;
    double s = 0.0;
    for (std::size_t i = 0; i < m.n; ++i) {
        double proj = 0.0;
        for (std::size_t k = 0; k < m.n; ++k) proj += q(k, i) * v[k];
        if (std::fabs(w[i]) > cutoff && cutoff > 0.0) {
            s += proj * proj / w[i];
        } else if (std::fabs(proj) > 1e-9) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return s;
}

// Mahalanobis norm ||x||_M = sqrt(x^T M x).
inline double m_norm(const Mat& m, const Vec& x) {
    return std::sqrt(std::max(0.0, dot(x, matvec(m, x))));
}

}  // namespace ccb

#endif  // CCB_LINALG_HPP
