#ifndef CCB_LINK_HPP
#define CCB_LINK_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ccb {

enum class LinkKind { Identity, Logistic, Tabulated };

// One logarithmic tail splice: the extension replaces the base function
// beyond x_star by a curve matching value and first two derivatives there.
struct TailSplice {
    bool active = false;
    double x_star = 0.0;
    double fx = 0.0;   // value at x_star (of the already-extended function)
    double fp = 0.0;   // first derivative at x_star
    double fpp = 0.0;  // second derivative at x_star
};

struct LinkFunction {
    LinkKind kind = LinkKind::Identity;
    // Conditional probability table for Tabulated, indexed by the parent bit
    // pattern (bit k = value of the k-th parent in the node's parent list).
    std::vector<double> table;
    TailSplice upper;  // used for x > upper.x_star
    TailSplice lower;  // used for x < lower.x_star

    static LinkFunction identity() { return LinkFunction{}; }
    static LinkFunction logistic() {
        LinkFunction f;
        f.kind = LinkKind::Logistic;
        return f;
    }
    static LinkFunction tabulated(std::vector<double> cpt) {
        LinkFunction f;
        f.kind = LinkKind::Tabulated;
        f.table = std::move(cpt);
        return f;
    }

    bool is_glm() const { return kind != LinkKind::Tabulated; }

    double base_eval(double x) const {
        switch (kind) {
            case LinkKind::Identity:
                return x;
            case LinkKind::Logistic:
                return 1.0 / (1.0 + std::exp(-x));
            default:
                throw std::logic_error("tabulated link has no scalar form");
        }
    }

    double base_d1(double x) const {
        if (kind == LinkKind::Identity) return 1.0;
        double f = base_eval(x);
        return f * (1.0 - f);
    }

    double base_d2(double x) const {
        if (kind == LinkKind::Identity) return 0.0;
        double f = base_eval(x);
        return f * (1.0 - f) * (1.0 - 2.0 * f);
    }

    // Value of the (possibly tail-extended) link.
    double eval(double x) const {
        if (upper.active && x > upper.x_star) {
            // g(x) = f(x*) + C [ln k - ln(x - x* + k)], C = f'^2/f'' < 0,
            // k = -f'/f'' > 0 (requires f''(x*) < 0).
            double c = upper.fp * upper.fp / upper.fpp;
            double k = -upper.fp / upper.fpp;
            return upper.fx + c * (std::log(k) - std::log(x - upper.x_star + k));
        }
        if (lower.active && x < lower.x_star) {
            // h(x) = g(x*) - C ln((-x + x* + k)/k), C = g'^2/g'' > 0,
            // k = g'/g'' > 0 (requires g''(x*) > 0).
            double c = lower.fp * lower.fp / lower.fpp;
            double k = lower.fp / lower.fpp;
            return lower.fx - c * std::log((-x + lower.x_star + k) / k);
        }
        return base_eval(x);
    }

    double d1(double x) const {
        if (upper.active && x > upper.x_star) {
            double c = upper.fp * upper.fp / upper.fpp;
            double k = -upper.fp / upper.fpp;
            return -c / (x - upper.x_star + k);
        }
        if (lower.active && x < lower.x_star) {
            double c = lower.fp * lower.fp / lower.fpp;
            double k = lower.fp / lower.fpp;
            return c / (-x + lower.x_star + k);
        }
        return base_d1(x);
    }

    double d2(double x) const {
        if (upper.active && x > upper.x_star) {
            double c = upper.fp * upper.fp / upper.fpp;
            double k = -upper.fp / upper.fpp;
            double d = x - upper.x_star + k;
            return c / (d * d);
        }
        if (lower.active && x < lower.x_star) {
            double c = lower.fp * lower.fp / lower.fpp;
            double k = lower.fp / lower.fpp;
            double d = -x + lower.x_star + k;
            return c / (d * d);
        }
        return base_d2(x);
    }
};

// Appendix A conversion: splice a logarithmic upper tail at x* = 2*pa_count
// (first integer above it with f'' < 0 if the threshold fails the sign
// condition) and then a lower tail at x* = -pa_count (f'' > 0 likewise).
// Identity links are returned unchanged: their range is already all of R.
inline LinkFunction extend_link_range(const LinkFunction& f, int pa_count) {
    if (f.kind != LinkKind::Logistic) return f;

    LinkFunction g = f;

    double xu = 2.0 * pa_count;
    while (!(g.base_d2(xu) < 0.0)) xu += 1.0;  // logistic: needs x > 0
    g.upper.active = true;
    g.upper.x_star = xu;
    g.upper.fx = g.base_eval(xu);
    g.upper.fp = g.base_d1(xu);
    g.upper.fpp = g.base_d2(xu);

    double xl = -1.0 * pa_count;
    while (!(g.d2(xl) > 0.0)) xl -= 1.0;  // logistic: needs x < 0
    g.lower.active = true;
    g.lower.x_star = xl;
    g.lower.fx = g.eval(xl);
    g.lower.fp = g.d1(xl);
    g.lower.fpp = g.d2(xl);

    return g;
}

}  // namespace ccb

#endif  // CCB_LINK_HPP
