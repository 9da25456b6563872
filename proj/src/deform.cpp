#include "dflat/deform.hpp"

#include <cmath>

namespace dflat {

double smooth_d1(const SmoothFn& f, double t) {
    return f.j(Jet2::variable(t, 1, 0)).grad[0];
}

DeformationFactors section4_factors(double mu, double sigma) {
    DeformationFactors fac;
    fac.kappa = make_smooth("kappa_mu", [mu](const auto& t) {
        return mu / (1.0 + mu * t);
    });
    fac.rho = make_smooth("rho_mu", [mu](const auto& t) {
        return -0.25 * log(1.0 + mu * t);
    });
    fac.nu = make_smooth("nu_mu", [mu, sigma](const auto& t) {
        return sigma * pow(1.0 + mu * t, -1.25);
    });
    return fac;
}

namespace {

// b^2 of the base pair at a generic point
template <class S>
S base_b2(const RiemannianMetric& alpha, const OneForm& beta, const std::vector<S>& x) {
    Mat<S> a = eval_metric(alpha, x);
    std::vector<S> b = eval_oneform(beta, x);
    std::vector<S> z = solve(a, b);
    S acc = zero_like(x[0]);
    for (size_t i = 0; i < b.size(); ++i) acc = acc + b[i] * z[i];
    return acc;
}

} // namespace

RiemannianMetric deform_stage1(const RiemannianMetric& alpha, const OneForm& beta,
                               const SmoothFn& kappa) {
    const int n = alpha.n;
    return make_metric(n, alpha.name + "~", [alpha, beta, kappa, n](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        Mat<S> a = eval_metric(alpha, x);
        std::vector<S> b = eval_oneform(beta, x);
        S b2 = base_b2(alpha, beta, x);
        S k = eval_smooth(kappa, b2);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = a(i, j) - k * b[i] * b[j];
        return a;
    });
}

RiemannianMetric deform_stage2(const RiemannianMetric& alpha, const OneForm& beta,
                               const SmoothFn& kappa, const SmoothFn& rho) {
    const int n = alpha.n;
    return make_metric(n, alpha.name + "^", [alpha, beta, kappa, rho, n](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        Mat<S> a = eval_metric(alpha, x);
        std::vector<S> b = eval_oneform(beta, x);
        S b2 = base_b2(alpha, beta, x);
        S k = eval_smooth(kappa, b2);
        S scale = exp(2.0 * eval_smooth(rho, b2));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = scale * (a(i, j) - k * b[i] * b[j]);
        return a;
    });
}

OneForm deform_stage3(const OneForm& beta, const RiemannianMetric& alpha,
                      const SmoothFn& nu) {
    const int n = beta.n;
    return make_oneform(n, beta.name + "-bar", [alpha, beta, nu, n](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b = eval_oneform(beta, x);
        S b2 = base_b2(alpha, beta, x);
        S v = eval_smooth(nu, b2);
        for (int i = 0; i < n; ++i) b[i] = v * b[i];
        return b;
    });
}

DeformedPair deform_pipeline(const RiemannianMetric& alpha, const OneForm& beta,
                             const DeformationFactors& factors) {
    DeformedPair out;
    out.metric = deform_stage2(alpha, beta, factors.kappa, factors.rho);
    out.form = deform_stage3(beta, alpha, factors.nu);
    // kappa == 0 forces constant rho, nu: the stages collapse to a scaling
    bool flat_kappa = true;
    for (double t : {0.0, 0.3, 0.7, 1.1})
        if (std::abs(factors.kappa.d(t)) > 1e-15) flat_kappa = false;
    out.trivial_scaling = flat_kappa;
    return out;
}

// ---- lemma verification -------------------------------------------------------------

namespace {

struct BaseQuantities {
    Contractions con;
    double kappa = 0, kappa_d = 0, rho_d = 0, nu_v = 0, nu_d = 0;
    double beta_y = 0;   // beta(y)
    double alpha2 = 0;   // alpha^2(y)
    double one_minus_kb2 = 0;
};

BaseQuantities base_quantities(const RiemannianMetric& alpha, const OneForm& beta,
                               const SmoothFn* kappa, const SmoothFn* rho,
                               const SmoothFn* nu, const std::vector<double>& x,
                               const std::vector<double>& y) {
    BaseQuantities q;
    q.con = contractions(alpha, beta, x, y);
    Mat<double> a = alpha.eval_d(x);
    const int n = alpha.n;
    for (int i = 0; i < n; ++i) {
        q.beta_y += q.con.b_lo[i] * y[i];
        for (int j = 0; j < n; ++j) q.alpha2 += a(i, j) * y[i] * y[j];
    }
    if (kappa) {
        q.kappa = kappa->d(q.con.b2);
        q.kappa_d = smooth_d1(*kappa, q.con.b2);
        q.one_minus_kb2 = 1.0 - q.kappa * q.con.b2;
        if (q.one_minus_kb2 <= 0.0)
            fail(ErrorKind::domain, "deformation invalid: 1 - kappa b^2 <= 0");
    }
    if (rho) q.rho_d = smooth_d1(*rho, q.con.b2);
    if (nu) {
        q.nu_v = nu->d(q.con.b2);
        q.nu_d = smooth_d1(*nu, q.con.b2);
    }
    return q;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs_diff(const Mat<double>& a, const Mat<double>& b) {
    double m = 0.0;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

// Lemma 2.1 right sides from base quantities.
std::vector<double> lemma1_spray(const RiemannianMetric& alpha, const BaseQuantities& q,
                                 const std::vector<double>& x,
                                 const std::vector<double>& y) {
    const int n = alpha.n;
    std::vector<double> G = spray_riemann(alpha, x, y);
    const Contractions& c = q.con;
    const double k = q.kappa, kd = q.kappa_d, w = q.one_minus_kb2;
    for (int i = 0; i < n; ++i) {
        double brace1 = 2.0 * w * q.beta_y * c.s_up0[i] + c.r00 * c.b_up[i] +
                        2.0 * k * c.s0 * q.beta_y * c.b_up[i];
        double brace2 = w * q.beta_y * q.beta_y * (c.r_up[i] + c.s_up[i]) +
                        k * c.r * q.beta_y * q.beta_y * c.b_up[i] -
                        2.0 * (c.r0 + c.s0) * q.beta_y * c.b_up[i];
        G[i] += -k / (2.0 * w) * brace1 + kd / (2.0 * w) * brace2;
    }
    return G;
}

Mat<double> lemma1_cov(const RiemannianMetric& alpha, const OneForm& beta,
                       const BaseQuantities& q, const std::vector<double>& x) {
    const int n = alpha.n;
    Mat<double> cov = covariant_derivative(alpha, beta, x);
    const Contractions& c = q.con;
    const double k = q.kappa, kd = q.kappa_d, w = q.one_minus_kb2;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double brace1 = c.b2 * c.rij(i, j) + c.b_lo[i] * c.s_lo[j] + c.b_lo[j] * c.s_lo[i];
            double brace2 = c.r * c.b_lo[i] * c.b_lo[j] -
                            c.b2 * c.b_lo[i] * (c.r_lo[j] + c.s_lo[j]) -
                            c.b2 * c.b_lo[j] * (c.r_lo[i] + c.s_lo[i]);
            cov(i, j) += k / w * brace1 - kd / w * brace2;
        }
    return cov;
}

} // namespace

LemmaResiduals verify_lemma1(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const std::vector<double>& x,
                             const std::vector<double>& y) {
    BaseQuantities q = base_quantities(alpha, beta, &kappa, nullptr, nullptr, x, y);
    RiemannianMetric tilde = deform_stage1(alpha, beta, kappa);

    LemmaResiduals res;
    res.spray = max_abs_diff(spray_riemann(tilde, x, y), lemma1_spray(alpha, q, x, y));
    res.cov = max_abs_diff(covariant_derivative(tilde, beta, x),
                           lemma1_cov(alpha, beta, q, x));
    return res;
}

LemmaResiduals verify_lemma2(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const SmoothFn& rho,
                             const std::vector<double>& x, const std::vector<double>& y) {
    const int n = alpha.n;
    BaseQuantities q = base_quantities(alpha, beta, &kappa, &rho, nullptr, x, y);
    RiemannianMetric tilde = deform_stage1(alpha, beta, kappa);
    RiemannianMetric hat = deform_stage2(alpha, beta, kappa, rho);
    const Contractions& c = q.con;

    // hat-G^i = tilde-G^i + rho' {2(r_0+s_0) y^i - (alpha^2 - kappa beta^2)(r^i + s^i + kappa/(1-kappa b^2) r b^i)}
    std::vector<double> formula = spray_riemann(tilde, x, y);
    const double at2 = q.alpha2 - q.kappa * q.beta_y * q.beta_y;
    for (int i = 0; i < n; ++i) {
        formula[i] += q.rho_d * (2.0 * (c.r0 + c.s0) * y[i] -
                                 at2 * (c.r_up[i] + c.s_up[i] +
                                        q.kappa / q.one_minus_kb2 * c.r * c.b_up[i]));
    }

    // hat-b_{i|j} = tilde-b_{i|j} - 2 rho' {b_i(r_j+s_j) + b_j(r_i+s_i) - r/(1-kappa b^2)(a_ij - kappa b_i b_j)}
    Mat<double> cov_formula = covariant_derivative(tilde, beta, x);
    Mat<double> a = alpha.eval_d(x);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double brace = c.b_lo[i] * (c.r_lo[j] + c.s_lo[j]) +
                           c.b_lo[j] * (c.r_lo[i] + c.s_lo[i]) -
                           c.r / q.one_minus_kb2 *
                               (a(i, j) - q.kappa * c.b_lo[i] * c.b_lo[j]);
            cov_formula(i, j) -= 2.0 * q.rho_d * brace;
        }

    LemmaResiduals res;
    res.spray = max_abs_diff(spray_riemann(hat, x, y), formula);
    res.cov = max_abs_diff(covariant_derivative(hat, beta, x), cov_formula);
    return res;
}

LemmaResiduals verify_lemma3(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const SmoothFn& rho,
                             const SmoothFn& nu, const std::vector<double>& x,
                             const std::vector<double>& y) {
    const int n = alpha.n;
    BaseQuantities q = base_quantities(alpha, beta, &kappa, &rho, &nu, x, y);
    RiemannianMetric hat = deform_stage2(alpha, beta, kappa, rho);
    OneForm bar = deform_stage3(beta, alpha, nu);
    const Contractions& c = q.con;

    // bar-G = hat-G; bar-b_{i|j} = nu hat-b_{i|j} + 2 nu' b_i (r_j + s_j)
    Mat<double> cov_hat = covariant_derivative(hat, beta, x);
    Mat<double> cov_formula(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            cov_formula(i, j) = q.nu_v * cov_hat(i, j) +
                                2.0 * q.nu_d * c.b_lo[i] * (c.r_lo[j] + c.s_lo[j]);

    DeformedPair pipeline = deform_pipeline(alpha, beta, {kappa, rho, nu});

    LemmaResiduals res;
    res.spray = max_abs_diff(spray_riemann(pipeline.metric, x, y), spray_riemann(hat, x, y));
    res.cov = max_abs_diff(covariant_derivative(hat, bar, x), cov_formula);
    return res;
}

// ---- factor ODEs ---------------------------------------------------------------------

double FactorOdeReport::max() const {
    double m = res_kappa;
    m = std::max(m, res_rho);
    m = std::max(m, res_nu);
    m = std::max(m, res_family);
    return m;
}

FactorOdeReport factor_odes(double mu, int samples) {
    DeformationFactors fac = section4_factors(mu, 1.0);
    FactorOdeReport rep;
    for (int k = 0; k < samples; ++k) {
        double t = (k + 0.5) / samples; // b^2 in (0, 1)
        if (1.0 + mu * t <= 0.0) continue;
        Jet2 tj = Jet2::variable(t, 1, 0);
        Jet2 kv = fac.kappa.j(tj);
        Jet2 rv = fac.rho.j(tj);
        Jet2 nv = fac.nu.j(tj);
        rep.res_kappa = std::max(rep.res_kappa, std::abs(kv.grad[0] + kv.val * kv.val));
        rep.res_rho = std::max(rep.res_rho, std::abs(kv.val + 4.0 * rv.grad[0]));
        rep.res_nu = std::max(rep.res_nu,
                              std::abs(nv.grad[0] + 1.25 * kv.val * nv.val));

        // the kappa' = -kappa^2 solution family 1/(t + c), -1/(c - t)
        for (double c0 : {1.5, 2.5}) {
            Jet2 k1 = 1.0 / (tj + c0);
            Jet2 k2 = -1.0 / (c0 - tj);
            rep.res_family = std::max(rep.res_family,
                                      std::abs(k1.grad[0] + k1.val * k1.val));
            rep.res_family = std::max(rep.res_family,
                                      std::abs(k2.grad[0] + k2.val * k2.val));
        }
    }
    return rep;
}

// ---- Prop 4.2 --------------------------------------------------------------------------

Prop42 build_prop42(int n, double mu, double sigma, double lambda,
                    std::vector<double> a_vec) {
    if (a_vec.empty()) a_vec.assign(n, 0.0);
    if (static_cast<int>(a_vec.size()) != n)
        fail(ErrorKind::input, "a_vec dimension mismatch");

    Prop42 out;
    out.params.mu = mu;
    out.params.sigma = sigma;
    out.params.lambda = lambda;
    out.params.a_vec = a_vec;

    // base data: b_i = lambda x_i + a_i, b^2 = |b|^2 (alpha Euclidean)
    out.metric = make_metric(n, "prop42-metric", [n, mu, lambda, a_vec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        S b2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) {
            b[i] = lambda * x[i] + a_vec[i] * one_like(x[0]);
            b2 = b2 + b[i] * b[i];
        }
        S w = 1.0 + mu * b2;
        S scale = pow(w, -1.5);
        Mat<S> a(n, zero_like(x[0]));
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                S num = (0.0 - mu) * b[i] * b[j];
                if (i == j) num = num + w;
                a(i, j) = num * scale;
            }
        }
        return a;
    });

    out.form = make_oneform(n, "prop42-form", [n, mu, sigma, lambda, a_vec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        S b2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) {
            b[i] = lambda * x[i] + a_vec[i] * one_like(x[0]);
            b2 = b2 + b[i] * b[i];
        }
        S scale = sigma * pow(1.0 + mu * b2, -1.25);
        for (int i = 0; i < n; ++i) b[i] = scale * b[i];
        return b;
    });

    // theta-bar_i = -1/4 lambda kappa(b^2) b_i with kappa = mu/(1+mu b^2)
    out.data.theta = make_oneform(n, "prop42-theta", [n, mu, lambda, a_vec](const auto& x) {
        using S = std::remove_cvref_t<decltype(x[0])>;
        std::vector<S> b(n, zero_like(x[0]));
        S b2 = zero_like(x[0]);
        for (int i = 0; i < n; ++i) {
            b[i] = lambda * x[i] + a_vec[i] * one_like(x[0]);
            b2 = b2 + b[i] * b[i];
        }
        S factor = (-0.25 * lambda * mu) / (1.0 + mu * b2);
        for (int i = 0; i < n; ++i) b[i] = factor * b[i];
        return b;
    });
    out.data.c.name = "prop42-c";
    out.data.c.eval_d = [n, mu, sigma, lambda, a_vec](const std::vector<double>& x) {
        double b2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double bi = lambda * x[i] + a_vec[i];
            b2 += bi * bi;
        }
        return lambda * sigma * (1.0 + 0.5 * mu * b2) * std::pow(1.0 + mu * b2, -0.75);
    };
    return out;
}

} // namespace dflat
