#include "dflat/fields.hpp"

#include <cmath>
#include <sstream>

namespace dflat {

namespace {

std::string point_str(const std::vector<double>& x) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

void require_spd(const Mat<double>& a, const std::vector<double>& x, const std::string& name) {
    if (!cholesky_spd(a)) {
        fail(ErrorKind::singular,
             "metric " + name + " not positive definite at x = " + point_str(x));
    }
}

} // namespace

Christoffel christoffel(const RiemannianMetric& metric, const std::vector<double>& x) {
    const int n = metric.n;
    std::vector<Jet2> xj = seed_all(x);
    Mat<Jet2> aj = metric.eval_j(xj);

    Mat<double> a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = aj(i, j).val;
    require_spd(a, x, metric.name);
    Mat<double> ainv = inverse(a);

    // dA[l](i,j) = d a_ij / d x^l
    auto dA = [&](int l, int i, int j) { return aj(i, j).grad[l]; };

    Christoffel gamma;
    gamma.n = n;
    gamma.g.assign(static_cast<size_t>(n) * n * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            for (int k = j; k < n; ++k) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += ainv(i, l) * (dA(j, l, k) + dA(k, j, l) - dA(l, j, k));
                acc *= 0.5;
                gamma.at(i, j, k) = acc;
                gamma.at(i, k, j) = acc;
            }
        }
    }
    return gamma;
}

std::vector<double> spray_riemann(const RiemannianMetric& metric,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y) {
    const int n = metric.n;
    Christoffel gamma = christoffel(metric, x);
    std::vector<double> G(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) acc += gamma.at(i, j, k) * y[j] * y[k];
        G[i] = 0.5 * acc;
    }
    return G;
}

Mat<double> covariant_derivative(const RiemannianMetric& metric, const OneForm& form,
                                 const std::vector<double>& x) {
    const int n = metric.n;
    Christoffel gamma = christoffel(metric, x);
    std::vector<Jet2> xj = seed_all(x);
    std::vector<Jet2> bj = form.eval_j(xj);

    Mat<double> cov(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = bj[i].grad[j];
            for (int k = 0; k < n; ++k) acc -= gamma.at(k, i, j) * bj[k].val;
            cov(i, j) = acc;
        }
    }
    return cov;
}

Contractions contractions(const RiemannianMetric& metric, const OneForm& form,
                          const std::vector<double>& x, const std::vector<double>& y) {
    const int n = metric.n;
    Mat<double> cov = covariant_derivative(metric, form, x);
    Mat<double> a = metric.eval_d(x);
    Mat<double> ainv = inverse(a);
    std::vector<double> b = form.eval_d(x);

    Contractions c;
    c.rij = Mat<double>(n);
    c.sij = Mat<double>(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            c.rij(i, j) = 0.5 * (cov(i, j) + cov(j, i));
            c.sij(i, j) = 0.5 * (cov(i, j) - cov(j, i));
        }

    c.b_lo = b;
    c.b_up.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.b_up[i] += ainv(i, j) * b[j];
    c.b2 = 0.0;
    for (int i = 0; i < n; ++i) c.b2 += b[i] * c.b_up[i];

    c.r_lo.assign(n, 0.0);
    c.s_lo.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) {
            c.r_lo[i] += c.b_up[l] * c.rij(l, i);
            c.s_lo[i] += c.b_up[l] * c.sij(l, i);
        }
    c.r_up.assign(n, 0.0);
    c.s_up.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            c.r_up[i] += ainv(i, j) * c.r_lo[j];
            c.s_up[i] += ainv(i, j) * c.s_lo[j];
        }

    c.si0.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.si0[i] += c.sij(i, j) * y[j];
    c.s_up0.assign(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.s_up0[i] += ainv(i, j) * c.si0[j];

    c.r00 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) c.r00 += c.rij(i, j) * y[i] * y[j];
    c.r0 = c.s0 = c.r = 0.0;
    for (int i = 0; i < n; ++i) {
        c.r0 += c.r_lo[i] * y[i];
        c.s0 += c.s_lo[i] * y[i];
        c.r += c.r_lo[i] * c.b_up[i];
    }
    return c;
}

double check_dually_flat_spray(const RiemannianMetric& metric, const OneForm& theta,
                               const std::vector<double>& x, const std::vector<double>& y) {
    const int n = metric.n;
    std::vector<double> G = spray_riemann(metric, x, y);
    Mat<double> a = metric.eval_d(x);
    Mat<double> ainv = inverse(a);
    std::vector<double> th = theta.eval_d(x);

    double alpha2 = 0.0, th_y = 0.0;
    for (int i = 0; i < n; ++i) {
        th_y += th[i] * y[i];
        for (int j = 0; j < n; ++j) alpha2 += a(i, j) * y[i] * y[j];
    }
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double th_up = 0.0;
        for (int j = 0; j < n; ++j) th_up += ainv(i, j) * th[j];
        worst = std::max(worst, std::abs(G[i] - 2.0 * th_y * y[i] - alpha2 * th_up));
    }
    return worst;
}

DuallyRelatedCheck check_dually_related(const RiemannianMetric& metric, const OneForm& form,
                                        const DuallyFlatData& data,
                                        const std::vector<double>& x) {
    const int n = metric.n;
    Mat<double> cov = covariant_derivative(metric, form, x);
    Mat<double> a = metric.eval_d(x);
    Mat<double> ainv = inverse(a);
    std::vector<double> b = form.eval_d(x);
    std::vector<double> th = data.theta.eval_d(x);
    double cval = data.c.eval_d(x);

    DuallyRelatedCheck out;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.residual = std::max(
                out.residual, std::abs(cov(i, j) - 2.0 * th[i] * b[j] - cval * a(i, j)));

    double th_b_up = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) th_b_up += th[i] * ainv(i, j) * b[j];
    out.c_bar = cval + 2.0 * th_b_up;
    return out;
}

std::vector<double> fit_theta_spray(const RiemannianMetric& metric,
                                    const std::vector<double>& x, const CounterRng& rng,
                                    std::uint64_t index_base) {
    const int n = metric.n;
    Mat<double> a = metric.eval_d(x);
    Mat<double> ainv = inverse(a);
    Christoffel gamma = christoffel(metric, x);

    const int ny = 2 * n + 2;
    std::vector<double> rows(static_cast<size_t>(ny) * n * n, 0.0);
    std::vector<double> rhs(static_cast<size_t>(ny) * n, 0.0);
    for (int k = 0; k < ny; ++k) {
        std::vector<double> y = rng.unit_sphere(index_base + k, n, 9000);
        double alpha2 = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) alpha2 += a(i, j) * y[i] * y[j];
        for (int i = 0; i < n; ++i) {
            double G = 0.0;
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q) G += 0.5 * gamma.at(i, p, q) * y[p] * y[q];
            rhs[static_cast<size_t>(k) * n + i] = G;
            for (int j = 0; j < n; ++j)
                rows[(static_cast<size_t>(k) * n + i) * n + j] =
                    2.0 * y[i] * y[j] + alpha2 * ainv(i, j);
        }
    }
    return least_squares(std::move(rows), ny * n, n, std::move(rhs));
}

FittedData fit_dually_related(const RiemannianMetric& metric, const OneForm& form,
                              const std::vector<double>& x) {
    const int n = metric.n;
    Mat<double> cov = covariant_derivative(metric, form, x);
    Mat<double> a = metric.eval_d(x);
    std::vector<double> b = form.eval_d(x);

    // unknowns: theta_1..theta_n, c
    std::vector<double> rows(static_cast<size_t>(n) * n * (n + 1), 0.0);
    std::vector<double> rhs(static_cast<size_t>(n) * n, 0.0);
    int row = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j, ++row) {
            rows[static_cast<size_t>(row) * (n + 1) + i] = 2.0 * b[j];
            rows[static_cast<size_t>(row) * (n + 1) + n] = a(i, j);
            rhs[row] = cov(i, j);
        }
    std::vector<double> sol = least_squares(rows, n * n, n + 1, rhs);

    FittedData out;
    out.theta.assign(sol.begin(), sol.begin() + n);
    out.c = sol[n];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.residual = std::max(out.residual,
                                    std::abs(cov(i, j) - 2.0 * out.theta[i] * b[j] -
                                             out.c * a(i, j)));
    return out;
}

std::vector<double> spray_from_alpha2(const RiemannianMetric& metric,
                                      const std::vector<double>& x,
                                      const std::vector<double>& y) {
    const int n = metric.n;
    std::vector<Jet2> joint = seed_joint(x, y);
    std::vector<Jet2> xj(joint.begin(), joint.begin() + n);
    Mat<Jet2> aj = metric.eval_j(xj);

    Jet2 alpha2 = Jet2::constant(0.0, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) alpha2 = alpha2 + aj(i, j) * joint[n + i] * joint[n + j];

    Mat<double> a = metric.eval_d(x);
    Mat<double> ainv = inverse(a);

    std::vector<double> G(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) {
            double bracket = -alpha2.grad[l];
            for (int k = 0; k < n; ++k) bracket += alpha2.h(k, n + l) * y[k];
            acc += ainv(i, l) * bracket;
        }
        G[i] = 0.25 * acc;
    }
    return G;
}

// ---- model fields --------------------------------------------------------------

namespace {

std::vector<double> normalize_avec(int n, std::vector<double> avec) {
    if (avec.empty()) avec.assign(n, 0.0);
    if (static_cast<int>(avec.size()) != n)
        fail(ErrorKind::input, "constant vector a has wrong dimension");
    return avec;
}

} // namespace

RiemannianMetric euclidean_metric(int n) {
    return make_metric(n, "euclidean", [n](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        Mat<S> a(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) a(i, i) = one_like(x[0]);
        return a;
    });
}

OneForm constant_oneform(int n, std::vector<double> avec) {
    avec = normalize_avec(n, std::move(avec));
    return make_oneform(n, "constant", [n, avec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) b[i] = avec[i] * one_like(x[0]);
        return b;
    });
}

RiemannianMetric csc_metric(int n, double mu) {
    return make_metric(n, "csc", [n, mu](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        S x2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) x2 = x2 + x[i] * x[i];
        S w = 1.0 + mu * x2;
        S winv2 = 1.0 / (w * w);
        Mat<S> a(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                S num = (0.0 - mu) * x[i] * x[j];
                if (i == j) num = num + w;
                a(i, j) = num * winv2;
            }
        }
        return a;
    });
}

OneForm cc_oneform(int n, double mu, double lambda, std::vector<double> avec) {
    avec = normalize_avec(n, std::move(avec));
    return make_oneform(n, "cc", [n, mu, lambda, avec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        S x2 = zero_like(x[0]);
        S ax = zero_like(x[0]);
        for (int i = 0; i < n; ++i) {
            x2 = x2 + x[i] * x[i];
            ax = ax + avec[i] * x[i];
        }
        S w = 1.0 + mu * x2;
        S scale = pow(w, -1.5);
        std::vector<S> b(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i)
            b[i] = (lambda * x[i] + avec[i] * w - mu * ax * x[i]) * scale;
        return b;
    });
}

OneForm cccc_oneform(int n, double lambda, std::vector<double> avec) {
    avec = normalize_avec(n, std::move(avec));
    return make_oneform(n, "cccc", [n, lambda, avec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) b[i] = lambda * x[i] + avec[i] * one_like(x[0]);
        return b;
    });
}

RiemannianMetric dfR_metric(int n, double mu) {
    return make_metric(n, "dfR", [n, mu](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        S x2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) x2 = x2 + x[i] * x[i];
        S w = 1.0 + mu * x2;
        S scale = pow(w, -1.5);
        Mat<S> a(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                S num = (0.0 - mu) * x[i] * x[j];
                if (i == j) num = num + w;
                a(i, j) = num * scale;
            }
        }
        return a;
    });
}

OneForm drb_oneform(int n, double mu, double lambda) {
    return make_oneform(n, "drb", [n, mu, lambda](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        S x2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) x2 = x2 + x[i] * x[i];
        S scale = pow(1.0 + mu * x2, -1.25);
        std::vector<S> b(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) b[i] = lambda * x[i] * scale;
        return b;
    });
}

RiemannianMetric random_poly_metric(int n, std::uint64_t seed, double eps) {
    CounterRng rng(seed);
    // symmetric quadratic perturbation of the identity
    std::vector<double> c0(static_cast<size_t>(n) * n), c1(static_cast<size_t>(n) * n * n),
        c2(static_cast<size_t>(n) * n * n * n);
    std::uint64_t ch = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = rng.symmetric(1, ch++);
            c0[static_cast<size_t>(i) * n + j] = c0[static_cast<size_t>(j) * n + i] = v;
            for (int k = 0; k < n; ++k) {
                double w = rng.symmetric(2, ch++);
                c1[(static_cast<size_t>(i) * n + j) * n + k] =
                    c1[(static_cast<size_t>(j) * n + i) * n + k] = w;
                for (int l = 0; l < n; ++l) {
                    double u = rng.symmetric(3, ch++);
                    c2[((static_cast<size_t>(i) * n + j) * n + k) * n + l] =
                        c2[((static_cast<size_t>(j) * n + i) * n + k) * n + l] = u;
                }
            }
        }
    return make_metric(n, "random_poly", [n, eps, c0, c1, c2](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        Mat<S> a(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                S v = c0[static_cast<size_t>(i) * n + j] * one_like(x[0]);
                for (int k = 0; k < n; ++k) {
                    v = v + c1[(static_cast<size_t>(i) * n + j) * n + k] * x[k];
                    for (int l = 0; l < n; ++l)
                        v = v + c2[((static_cast<size_t>(i) * n + j) * n + k) * n + l] * x[k] * x[l];
                }
                a(i, j) = eps * v;
                if (i == j) a(i, j) = a(i, j) + 1.0;
            }
        }
        return a;
    });
}

OneForm random_affine_oneform(int n, std::uint64_t seed, double scale) {
    CounterRng rng(seed);
    std::vector<double> c(n), d(static_cast<size_t>(n) * n);
    std::uint64_t ch = 500;
    for (int i = 0; i < n; ++i) {
        c[i] = scale * rng.symmetric(4, ch++);
        for (int j = 0; j < n; ++j) d[static_cast<size_t>(i) * n + j] = scale * rng.symmetric(5, ch++);
    }
    return make_oneform(n, "random_affine", [n, c, d](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) {
            S v = c[i] * one_like(x[0]);
            for (int j = 0; j < n; ++j) v = v + d[static_cast<size_t>(i) * n + j] * x[j];
            b[i] = v;
        }
        return b;
    });
}

} // namespace dflat
