#include "dflat/finsler.hpp"

#include <cmath>
#include <sstream>

namespace dflat {

namespace {

// jets of alpha, beta, b^2, s over the joint (x, y) variables
struct CoreJets {
    Jet2 alpha, beta, b2, s;
    Mat<double> a;
    std::vector<double> b_form;
};

CoreJets core_jets(const RiemannianMetric& metric, const OneForm& form,
                   const std::vector<double>& x, const std::vector<double>& y) {
    const int n = metric.n;
    std::vector<Jet2> joint = seed_joint(x, y);
    std::vector<Jet2> xj(joint.begin(), joint.begin() + n);
    Mat<Jet2> aj = metric.eval_j(xj);
    std::vector<Jet2> bj = form.eval_j(xj);

    Jet2 alpha2 = Jet2::constant(0.0, 2 * n);
    Jet2 beta = Jet2::constant(0.0, 2 * n);
    for (int i = 0; i < n; ++i) {
        beta = beta + bj[i] * joint[n + i];
        for (int j = 0; j < n; ++j) alpha2 = alpha2 + aj(i, j) * joint[n + i] * joint[n + j];
    }
    // b^2 = b_i a^{ij} b_j through a jet-valued solve
    std::vector<Jet2> z = solve(aj, bj);
    Jet2 b2 = Jet2::constant(0.0, 2 * n);
    for (int i = 0; i < n; ++i) b2 = b2 + bj[i] * z[i];

    CoreJets c{sqrt(alpha2), beta, b2, Jet2(), Mat<double>(n), std::vector<double>(n)};
    c.s = c.beta / c.alpha;
    for (int i = 0; i < n; ++i) {
        c.b_form[i] = bj[i].val;
        for (int j = 0; j < n; ++j) c.a(i, j) = aj(i, j).val;
    }
    return c;
}

} // namespace

template <class P>
AssembledEval assemble(const RiemannianMetric& alpha, const OneForm& beta, const P& phi,
                       const std::vector<double>& x, const std::vector<double>& y) {
    CoreJets c = core_jets(alpha, beta, x, y);
    AssembledEval e;
    e.n = alpha.n;
    e.x = x;
    e.y = y;
    e.alpha = c.alpha;
    e.beta = c.beta;
    e.b2 = c.b2;
    e.s = c.s;
    e.a = std::move(c.a);
    e.b_form = std::move(c.b_form);
    e.phi2 = phi.jet(e.b2.val, e.s.val);
    Jet2 phij = compose2(e.phi2, e.b2, e.s);
    e.F = e.alpha * phij;
    e.F2 = e.F * e.F;
    return e;
}

template AssembledEval assemble<PhiFunction>(const RiemannianMetric&, const OneForm&,
                                             const PhiFunction&,
                                             const std::vector<double>&,
                                             const std::vector<double>&);
template AssembledEval assemble<CheckPhiFunction>(const RiemannianMetric&, const OneForm&,
                                                  const CheckPhiFunction&,
                                                  const std::vector<double>&,
                                                  const std::vector<double>&);

ScalarPair b2_and_s(const RiemannianMetric& alpha, const OneForm& beta,
                    const std::vector<double>& x, const std::vector<double>& y) {
    const int n = alpha.n;
    Mat<double> a = alpha.eval_d(x);
    std::vector<double> b = beta.eval_d(x);
    std::vector<double> z = solve(a, b);
    ScalarPair out;
    double alpha2 = 0.0, bv = 0.0;
    for (int i = 0; i < n; ++i) {
        out.b2 += b[i] * z[i];
        bv += b[i] * y[i];
        for (int j = 0; j < n; ++j) alpha2 += a(i, j) * y[i] * y[j];
    }
    out.s = bv / std::sqrt(alpha2);
    return out;
}

std::vector<double> dual_flat_residual(const AssembledEval& e) {
    const int n = e.n;
    std::vector<double> res(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += e.F2.h(k, n + l) * e.y[k];
        res[l] = acc - 2.0 * e.F2.grad[l];
    }
    return res;
}

std::vector<double> dual_flat_residual_normalized(const AssembledEval& e) {
    const int n = e.n;
    std::vector<double> res(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += e.F2.h(k, n + l) * e.y[k];
        double den = 1.0 + std::abs(acc) + 2.0 * std::abs(e.F2.grad[l]);
        res[l] = (acc - 2.0 * e.F2.grad[l]) / den;
    }
    return res;
}

std::vector<double> projective_flat_residual(const AssembledEval& e) {
    const int n = e.n;
    std::vector<double> res(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += e.F.h(k, n + l) * e.y[k];
        res[l] = acc - e.F.grad[l];
    }
    return res;
}

Mat<double> fundamental_tensor(const AssembledEval& e) {
    const int n = e.n;
    Mat<double> g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = 0.5 * e.F2.h(n + i, n + j);
    return g;
}

std::vector<double> spray_finsler(const AssembledEval& e) {
    const int n = e.n;
    Mat<double> g = fundamental_tensor(e);
    std::vector<double> rhs(n, 0.0);
    for (int l = 0; l < n; ++l) {
        double acc = -e.F2.grad[l];
        for (int k = 0; k < n; ++k) acc += e.F2.h(k, n + l) * e.y[k];
        rhs[l] = 0.25 * acc;
    }
    return solve(g, rhs);
}

// ---- structure identities ----------------------------------------------------------

double StructureReport::max_conditional() const {
    double m = res_rij;
    m = std::max(m, res_sij);
    m = std::max(m, res_b2_cbar);
    m = std::max(m, res_alpha_xl);
    m = std::max(m, res_beta_xl);
    return m;
}

double StructureReport::max_all() const {
    return std::max({max_conditional(), res_b2_rs, res_s_yl});
}

StructureReport structure_identities(const RiemannianMetric& alpha, const OneForm& beta,
                                     const DuallyFlatData& data,
                                     const std::vector<double>& x,
                                     const std::vector<double>& y, double pre_tol) {
    const int n = alpha.n;

    double spray_res = check_dually_flat_spray(alpha, data.theta, x, y);
    if (spray_res > pre_tol) {
        std::ostringstream os;
        os << "structure identities: spray condition of (3) fails, residual " << spray_res;
        fail(ErrorKind::contract, os.str());
    }
    DuallyRelatedCheck rel = check_dually_related(alpha, beta, data, x);
    if (rel.residual > pre_tol) {
        std::ostringstream os;
        os << "structure identities: dually-related condition of (3) fails, residual "
           << rel.residual;
        fail(ErrorKind::contract, os.str());
    }

    CoreJets c = core_jets(alpha, beta, x, y);
    Contractions con = contractions(alpha, beta, x, y);
    std::vector<double> th = data.theta.eval_d(x);
    double cval = data.c.eval_d(x);
    double c_bar = rel.c_bar;

    double theta_y = 0.0;
    for (int i = 0; i < n; ++i) theta_y += th[i] * y[i];
    std::vector<double> y_lo(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y_lo[i] += c.a(i, j) * y[j];

    StructureReport rep;
    rep.c_bar = c_bar;
    const double alpha_v = c.alpha.val;
    const double beta_v = c.beta.val;
    const double s_v = c.s.val;

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            rep.res_rij =
                std::max(rep.res_rij,
                         std::abs(con.rij(i, j) - cval * c.a(i, j) - th[i] * c.b_form[j] -
                                  th[j] * c.b_form[i]));
            rep.res_sij = std::max(rep.res_sij,
                                   std::abs(con.sij(i, j) - th[i] * c.b_form[j] +
                                            th[j] * c.b_form[i]));
        }

    for (int l = 0; l < n; ++l) {
        double db2 = c.b2.grad[l];
        rep.res_b2_rs =
            std::max(rep.res_b2_rs, std::abs(db2 - 2.0 * (con.r_lo[l] + con.s_lo[l])));
        rep.res_b2_cbar =
            std::max(rep.res_b2_cbar, std::abs(db2 - 2.0 * c_bar * c.b_form[l]));
        rep.res_alpha_xl = std::max(
            rep.res_alpha_xl,
            std::abs(c.alpha.grad[l] - 2.0 / alpha_v *
                                           (alpha_v * alpha_v * th[l] +
                                            2.0 * theta_y * y_lo[l])));
        rep.res_beta_xl = std::max(
            rep.res_beta_xl, std::abs(c.beta.grad[l] - c_bar * y_lo[l] -
                                      2.0 * beta_v * th[l] - 4.0 * theta_y * c.b_form[l]));
        rep.res_s_yl = std::max(
            rep.res_s_yl, std::abs(c.s.grad[alpha.n + l] -
                                   (alpha_v * c.b_form[l] - s_v * y_lo[l]) /
                                       (alpha_v * alpha_v)));
    }
    return rep;
}

UnconditionalReport unconditional_identities(const RiemannianMetric& alpha,
                                             const OneForm& beta,
                                             const std::vector<double>& x,
                                             const std::vector<double>& y) {
    const int n = alpha.n;
    CoreJets c = core_jets(alpha, beta, x, y);
    Contractions con = contractions(alpha, beta, x, y);
    std::vector<double> y_lo(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y_lo[i] += c.a(i, j) * y[j];

    UnconditionalReport rep;
    const double alpha_v = c.alpha.val;
    const double s_v = c.s.val;
    for (int l = 0; l < n; ++l) {
        rep.res_b2_rs = std::max(
            rep.res_b2_rs,
            std::abs(c.b2.grad[l] - 2.0 * (con.r_lo[l] + con.s_lo[l])));
        rep.res_s_yl = std::max(
            rep.res_s_yl, std::abs(c.s.grad[n + l] -
                                   (alpha_v * c.b_form[l] - s_v * y_lo[l]) /
                                       (alpha_v * alpha_v)));
    }
    return rep;
}

FactorizationSample factorization_sample(const GeneralABMetric& m,
                                         const DuallyFlatData& data,
                                         const std::vector<double>& x,
                                         const std::vector<double>& y) {
    const int n = m.alpha.n;
    AssembledEval e = assemble(m.alpha, m.beta, m.phi, x, y);
    DuallyRelatedCheck rel = check_dually_related(m.alpha, m.beta, data, x);

    FactorizationSample out;
    out.c_bar = rel.c_bar;
    out.lhs = dual_flat_residual(e);

    const Jet2& p = e.phi2;
    const double v = p.val, p1 = p.grad[0], p2 = p.grad[1];
    out.pde1 = p2 * p2 + v * p.h(1, 1) + 2.0 * e.s.val * p1 * p2 +
               2.0 * e.s.val * v * p.h(0, 1) - 4.0 * v * p1;

    std::vector<double> y_lo(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) y_lo[i] += e.a(i, j) * y[j];

    out.rhs.assign(n, 0.0);
    const double alpha_v = e.alpha.val;
    for (int l = 0; l < n; ++l) {
        out.rhs[l] = 2.0 * alpha_v * out.c_bar * out.pde1 *
                     (alpha_v * e.b_form[l] - e.s.val * y_lo[l]);
        out.mismatch = std::max(out.mismatch, std::abs(out.lhs[l] - out.rhs[l]));
    }
    return out;
}

Theorem1Report theorem1_equivalence(const GeneralABMetric& m, const DuallyFlatData& data,
                                    std::uint64_t seed, long samples, double x_radius,
                                    double cbar_floor) {
    auto sampler = make_sampler(m.alpha, m.beta, m.phi, seed, x_radius);
    Theorem1Report rep;
    rep.min_abs_cbar = std::numeric_limits<double>::infinity();
    for (long k = 0; k < samples; ++k) {
        auto d = sampler.draw(static_cast<std::uint64_t>(k));
        FactorizationSample fs = factorization_sample(m, data, d.x, d.y);
        ++rep.samples;
        for (double c : fs.lhs) rep.max_dual_flat = std::max(rep.max_dual_flat, std::abs(c));
        double scale = 1.0;
        for (double c : fs.lhs) scale = std::max(scale, 1.0 + std::abs(c));
        rep.max_mismatch = std::max(rep.max_mismatch, fs.mismatch / scale);
        rep.max_pde1 = std::max(rep.max_pde1, std::abs(fs.pde1));
        rep.min_abs_cbar = std::min(rep.min_abs_cbar, std::abs(fs.c_bar));
    }
    rep.trivial_case = rep.min_abs_cbar < cbar_floor;
    return rep;
}

// ---- sampler -------------------------------------------------------------------------

template <class P>
typename XYSampler<P>::Draw XYSampler<P>::draw(std::uint64_t index) const {
    const int n = alpha.n;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::uint64_t key = index * 1000 + attempt;
        Draw d;
        d.x = rng.ball(key, n, x_radius, 0);
        d.y = rng.unit_sphere(key, n, 10);
        ScalarPair bs;
        try {
            bs = b2_and_s(alpha, beta, d.x, d.y);
        } catch (const Error&) {
            continue; // metric degenerate at this x
        }
        d.b2 = bs.b2;
        d.s = bs.s;
        if (std::abs(d.s) > s_cap * std::sqrt(std::max(d.b2, 0.0))) continue;
        // keep b^2 away from a finite domain bound, mirroring the 0.8 r_mu
        // convention of the model ball
        if (std::isfinite(phi.b2_sup) && d.b2 > 0.81 * phi.b2_sup) continue;
        if (!phi.in_domain(d.b2, d.s)) continue;
        return d;
    }
    fail(ErrorKind::domain,
         "sampler could not find a valid (x, y) inside the phi domain; "
         "shrink the x radius or loosen the domain");
}

template struct XYSampler<PhiFunction>;
template struct XYSampler<CheckPhiFunction>;

} // namespace dflat
