#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "dflat/error.hpp"

namespace dflat {

namespace detail {

struct GaussLegendre15 {
    std::array<double, 15> node{};
    std::array<double, 15> weight{};

    // Nodes/weights from Newton iteration on P_15; avoids transcribed tables.
    GaussLegendre15() {
        const int n = 15;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) {
                    // one polishing pass after convergence
                    p0 = 1.0; p1 = x;
                    for (int k = 2; k <= n; ++k) {
                        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n * (x * p1 - p0) / (x * x - 1.0);
                    break;
                }
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

inline const GaussLegendre15& gl15() {
    static const GaussLegendre15 rule;
    return rule;
}

} // namespace detail

struct QuadratureOptions {
    double abs_tol = 1e-12;
    int max_depth = 30;
};

// Adaptive Gauss-Legendre for a vector-valued smooth integrand. All
// components share the refinement so coupled quantities (f', f'', f''' under
// one integral) stay consistent. Scalar type of the components may be double
// or std::complex<double>.
template <class S, class F>
std::vector<S> integrate(F&& fn, double a, double b, int ncomp,
                         const QuadratureOptions& opt = {}) {
    auto panel = [&](double lo, double hi) {
        const auto& rule = detail::gl15();
        std::vector<S> acc(ncomp, S{});
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (int q = 0; q < 15; ++q) {
            std::vector<S> v = fn(mid + half * rule.node[q]);
            for (int c = 0; c < ncomp; ++c) acc[c] += (half * rule.weight[q]) * v[c];
        }
        return acc;
    };

    struct Frame {
        double lo, hi, tol;
        int depth;
        std::vector<S> whole;
    };

    if (a == b) return std::vector<S>(ncomp, S{});

    std::vector<S> total(ncomp, S{});
    std::vector<Frame> stack;
    stack.push_back({a, b, opt.abs_tol, 0, panel(a, b)});
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        const double mid = 0.5 * (fr.lo + fr.hi);
        std::vector<S> left = panel(fr.lo, mid);
        std::vector<S> right = panel(mid, fr.hi);
        double err = 0.0;
        for (int c = 0; c < ncomp; ++c)
            err = std::max(err, std::abs(left[c] + right[c] - fr.whole[c]));
        if (err <= fr.tol || fr.depth >= opt.max_depth) {
            if (err > fr.tol)
                fail(ErrorKind::numeric, "quadrature failed to converge");
            for (int c = 0; c < ncomp; ++c) total[c] += left[c] + right[c];
        } else {
            stack.push_back({fr.lo, mid, 0.5 * fr.tol, fr.depth + 1, std::move(left)});
            stack.push_back({mid, fr.hi, 0.5 * fr.tol, fr.depth + 1, std::move(right)});
        }
    }
    return total;
}

} // namespace dflat
