#include "dflat/phifunc.hpp"

#include <cmath>
#include <sstream>

#include "dflat/quadrature.hpp"

namespace dflat {

namespace {

void check_cone(double b2, double s, double b2_sup) {
    if (b2 < 0.0) fail(ErrorKind::domain, "b^2 must be non-negative");
    double b = std::sqrt(b2);
    if (std::abs(s) > b * (1.0 + 1e-12) + 1e-15)
        fail(ErrorKind::domain, "(b^2, s) outside the cone |s| <= b");
    if (!(b2 < b2_sup))
        fail(ErrorKind::domain, "b^2 beyond the domain bound b_o^2");
}

std::string at_point(double b2, double s) {
    std::ostringstream os;
    os << " at (b^2, s) = (" << b2 << ", " << s << ")";
    return os.str();
}

} // namespace

double PhiFunction::value(double b2, double s) const {
    check_cone(b2, s, b2_sup);
    double psi = psi_d(b2, s);
    if (!(psi > 0.0))
        fail(ErrorKind::domain, "phi radicand non-positive" + at_point(b2, s));
    double v = std::sqrt(psi);
    if (perturb_s3 != 0.0) v += perturb_s3 * s * s * s;
    return v;
}

Jet2 PhiFunction::jet(double b2, double s) const {
    check_cone(b2, s, b2_sup);
    Jet2 psi = psi_j(b2, s);
    if (!(psi.val > 0.0))
        fail(ErrorKind::domain, "phi radicand non-positive" + at_point(b2, s));
    Jet2 p = sqrt(psi);
    if (perturb_s3 != 0.0) {
        p.val += perturb_s3 * s * s * s;
        p.grad[1] += 3.0 * perturb_s3 * s * s;
        p.h(1, 1) += 6.0 * perturb_s3 * s;
    }
    return p;
}

Third PhiFunction::psi_third(double b2, double s) const {
    if (!has_third_order())
        fail(ErrorKind::contract,
             "third-order data unavailable for phi '" + name + "'");
    check_cone(b2, s, b2_sup);
    return psi_t3(b2, s);
}

bool PhiFunction::in_domain(double b2, double s) const noexcept {
    if (b2 < 0.0 || !(b2 < b2_sup)) return false;
    double b = std::sqrt(b2);
    if (std::abs(s) > b * (1.0 + 1e-12) + 1e-15) return false;
    try {
        double psi = psi_d(b2, s);
        return std::isfinite(psi) && psi >= margin * margin;
    } catch (const Error&) {
        return false;
    }
}

PhiFunction PhiFunction::perturbed(double c) const {
    PhiFunction p = *this;
    p.name = name + "-perturbed";
    p.perturb_s3 = c;
    return p;
}

double CheckPhiFunction::value(double b2, double s) const {
    check_cone(b2, s, b2_sup);
    return eval_d(b2, s);
}

Jet2 CheckPhiFunction::jet(double b2, double s) const {
    check_cone(b2, s, b2_sup);
    return eval_j(b2, s);
}

bool CheckPhiFunction::in_domain(double b2, double s) const noexcept {
    if (b2 < 0.0 || !(b2 < b2_sup)) return false;
    double b = std::sqrt(b2);
    if (std::abs(s) > b * (1.0 + 1e-12) + 1e-15) return false;
    try {
        return std::isfinite(eval_d(b2, s));
    } catch (const Error&) {
        return false;
    }
}

// ---- PDE residuals -------------------------------------------------------------

namespace {

struct Pde1Terms {
    double t1, t2, t3, t4, t5;
    double sum() const { return t1 + t2 + t3 + t4 + t5; }
    double scale() const {
        return 1.0 + std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) +
               std::abs(t5);
    }
};

Pde1Terms pde1_terms(const PhiFunction& phi, double b2, double s) {
    Jet2 p = phi.jet(b2, s);
    const double v = p.val, p1 = p.grad[0], p2 = p.grad[1];
    const double p12 = p.h(0, 1), p22 = p.h(1, 1);
    return {p2 * p2, v * p22, 2.0 * s * p1 * p2, 2.0 * s * v * p12, -4.0 * v * p1};
}

} // namespace

double pde1_residual(const PhiFunction& phi, double b2, double s) {
    return pde1_terms(phi, b2, s).sum();
}

double pde1_residual_normalized(const PhiFunction& phi, double b2, double s) {
    Pde1Terms t = pde1_terms(phi, b2, s);
    return t.sum() / t.scale();
}

double psi22_residual(const PhiFunction& phi, double b2, double s) {
    Jet2 p = phi.jet(b2, s);
    Jet2 psi = p * p;
    return psi.h(1, 1) + 2.0 * s * psi.h(0, 1) - 4.0 * psi.grad[0];
}

double varphi_residual(const CheckPhiFunction& vphi, double b2, double s) {
    Jet2 j = vphi.jet(b2, s);
    return j.h(1, 1) + 2.0 * s * j.h(0, 1) - 2.0 * j.grad[0];
}

double checkp_residual(const CheckPhiFunction& vphi, double b2, double s) {
    // vphi_22 - 2(vphi_1 - s vphi_12): the same polynomial rearranged, kept
    // as an alias so the two spellings cannot drift apart
    return varphi_residual(vphi, b2, s);
}

// ---- solution generator --------------------------------------------------------

namespace {

// quadrature components over sigma in [0, s]:
//   Q1   = int f'(b2 - sigma^2)            Q2   = int sigma^2 f'
//   Q1d  = int f''                         Q2d  = int sigma^2 f''
//   Q1dd = int f'''                        Q2dd = int sigma^2 f'''
struct GenQuads {
    double q1, q2, q1d, q2d, q1dd, q2dd;
};

template <class S, class FF>
std::array<S, 6> generator_quads(const FF& f, double b2, double s) {
    auto integrand = [&](double sigma) {
        Taylor3<S> t = f(Taylor3<S>::variable(S(b2 - sigma * sigma)));
        S d1 = t.d1(), d2 = t.d2(), d3 = t.d3();
        double s2 = sigma * sigma;
        return std::vector<S>{d1, s2 * d1, d2, s2 * d2, d3, s2 * d3};
    };
    std::vector<S> q = integrate<S>(integrand, 0.0, s, 6);
    return {q[0], q[1], q[2], q[3], q[4], q[5]};
}

// assemble the six psi partials from Taylor data of f, g and the quadratures
struct PsiParts {
    double v, d1, d2, d11, d12, d22;
};

PsiParts assemble_psi(double s, double g0, double g1, double g2, double g3,
                      double f0w, double f1w, double f2w, const GenQuads& q) {
    const double s2 = s * s;
    PsiParts p;
    p.v = g0 + 2.0 * g1 * s2 + s * f0w + (s2 * q.q1 + q.q2);
    p.d1 = g1 + 2.0 * g2 * s2 + s * f1w + s2 * q.q1d + q.q2d;
    p.d2 = 4.0 * g1 * s + f0w + 2.0 * s * q.q1;
    p.d11 = g2 + 2.0 * g3 * s2 + s * f2w + s2 * q.q1dd + q.q2dd;
    p.d12 = 4.0 * g2 * s + f1w + 2.0 * s * q.q1d;
    p.d22 = 4.0 * g1 + 2.0 * q.q1;
    return p;
}

Jet2 psi_jet_from_parts(const PsiParts& p) {
    Jet2 j = Jet2::constant(p.v, 2);
    j.grad[0] = p.d1;
    j.grad[1] = p.d2;
    j.h(0, 0) = p.d11;
    j.h(0, 1) = p.d12;
    j.h(1, 0) = p.d12;
    j.h(1, 1) = p.d22;
    return j;
}

} // namespace

PhiFunction phi_from_fg(const SolutionSpec& spec, std::string name, double b2_sup) {
    auto f = spec.f;
    auto g = spec.g;
    auto parts = [f, g](double b2, double s) {
        RTaylor3 gt = g(RTaylor3::variable(b2));
        RTaylor3 ft = f(RTaylor3::variable(b2 - s * s));
        auto q6 = generator_quads<double>(f, b2, s);
        GenQuads q{q6[0], q6[1], q6[2], q6[3], q6[4], q6[5]};
        return assemble_psi(s, gt.value(), gt.d1(), gt.d2(), gt.d3(), ft.value(),
                            ft.d1(), ft.d2(), q);
    };
    PhiFunction phi;
    phi.name = std::move(name);
    phi.b2_sup = b2_sup;
    phi.psi_d = [f, g](double b2, double s) {
        RTaylor3 gt = g(RTaylor3::variable(b2));
        RTaylor3 ft = f(RTaylor3::variable(b2 - s * s));
        auto integrand = [&](double sigma) {
            RTaylor3 t = f(RTaylor3::variable(b2 - sigma * sigma));
            return std::vector<double>{t.d1(), sigma * sigma * t.d1()};
        };
        std::vector<double> q = integrate<double>(integrand, 0.0, s, 2);
        return gt.value() + 2.0 * gt.d1() * s * s + s * ft.value() + s * s * q[0] + q[1];
    };
    phi.psi_j = [parts](double b2, double s) { return psi_jet_from_parts(parts(b2, s)); };
    return phi;
}

PhiFunction phi_from_fg_complex(const ComplexSolutionSpec& spec, std::string name,
                                double b2_sup) {
    using C = std::complex<double>;
    auto f = spec.f;
    auto g = spec.g;
    auto parts = [f, g](double b2, double s) {
        CTaylor3 gt = g(CTaylor3::variable(C(b2)));
        CTaylor3 ft = f(CTaylor3::variable(C(b2 - s * s)));
        auto q6 = generator_quads<C>(f, b2, s);
        const double s2 = s * s;
        C v = gt.value() + 2.0 * gt.d1() * s2 + s * ft.value() + (s2 * q6[0] + q6[1]);
        C d1 = gt.d1() + 2.0 * gt.d2() * s2 + s * ft.d1() + s2 * q6[2] + q6[3];
        C d2 = 4.0 * gt.d1() * s + ft.value() + 2.0 * s * q6[0];
        C d11 = gt.d2() + 2.0 * gt.d3() * s2 + s * ft.d2() + s2 * q6[4] + q6[5];
        C d12 = 4.0 * gt.d2() * s + ft.d1() + 2.0 * s * q6[2];
        C d22 = 4.0 * gt.d1() + 2.0 * q6[0];
        return PsiParts{v.real(), d1.real(), d2.real(),
                        d11.real(), d12.real(), d22.real()};
    };
    PhiFunction phi;
    phi.name = std::move(name);
    phi.b2_sup = b2_sup;
    phi.psi_d = [parts](double b2, double s) { return parts(b2, s).v; };
    phi.psi_j = [parts](double b2, double s) { return psi_jet_from_parts(parts(b2, s)); };
    return phi;
}

CheckPhiFunction check_from_hf(std::function<RTaylor3(const RTaylor3&)> f,
                               std::function<RTaylor3(const RTaylor3&)> h,
                               std::string name, double b2_sup) {
    CheckPhiFunction out;
    out.name = std::move(name);
    out.b2_sup = b2_sup;
    out.eval_d = [f, h](double b2, double s) {
        RTaylor3 ft = f(RTaylor3::variable(b2 - s * s));
        RTaylor3 ht = h(RTaylor3::variable(b2));
        auto integrand = [&](double sigma) {
            return std::vector<double>{f(RTaylor3::variable(b2 - sigma * sigma)).d1()};
        };
        double q1 = integrate<double>(integrand, 0.0, s, 1)[0];
        return ht.value() * s + ft.value() + 2.0 * s * q1;
    };
    out.eval_j = [f, h](double b2, double s) {
        RTaylor3 ft = f(RTaylor3::variable(b2 - s * s));
        RTaylor3 ht = h(RTaylor3::variable(b2));
        auto integrand = [&](double sigma) {
            RTaylor3 t = f(RTaylor3::variable(b2 - sigma * sigma));
            return std::vector<double>{t.d1(), t.d2(), t.d3()};
        };
        std::vector<double> q = integrate<double>(integrand, 0.0, s, 3);
        // boundary terms of d/ds under the moving limit cancel against the
        // chain-rule terms of f(b^2 - s^2); see the psi_2 assembly above
        Jet2 j = Jet2::constant(ht.value() * s + ft.value() + 2.0 * s * q[0], 2);
        j.grad[0] = ht.d1() * s + ft.d1() + 2.0 * s * q[1];
        j.grad[1] = ht.value() + 2.0 * q[0];
        j.h(0, 0) = ht.d2() * s + ft.d2() + 2.0 * s * q[2];
        j.h(0, 1) = ht.d1() + 2.0 * q[1];
        j.h(1, 0) = j.h(0, 1);
        j.h(1, 1) = 2.0 * ft.d1();
        return j;
    };
    return out;
}

// ---- theorem maps ---------------------------------------------------------------

CheckPhiFunction theorem2_forward(const PhiFunction& phi, double probe_tol) {
    GridSpec probe;
    probe.rows = 12;
    probe.cols = 12;
    GridScan scan = scan_pde1(phi, probe);
    if (scan.evaluated == 0)
        fail(ErrorKind::contract, "forward map: no probe points inside the domain of '" +
                                      phi.name + "'");
    if (scan.max_abs > probe_tol) {
        std::ostringstream os;
        os << "forward map precondition failed: pde1 residual " << scan.max_abs
           << " > " << probe_tol << " for '" << phi.name << "'";
        fail(ErrorKind::contract, os.str());
    }
    if (!phi.has_third_order())
        fail(ErrorKind::contract,
             "forward map needs third-order psi data for '" + phi.name + "'");

    PhiFunction base = phi;
    CheckPhiFunction out;
    out.name = "(" + phi.name + "^2)_2";
    out.b2_sup = phi.b2_sup;
    out.grid_b2_lo = phi.grid_b2_lo;
    out.grid_b2_hi = phi.grid_b2_hi;
    out.eval_d = [base](double b2, double s) { return base.psi_j(b2, s).grad[1]; };
    out.eval_j = [base](double b2, double s) {
        Third t = base.psi_third(b2, s);
        Jet2 j = Jet2::constant(t.p2, 2);
        j.grad[0] = t.p12;
        j.grad[1] = t.p22;
        j.h(0, 0) = t.p112;
        j.h(0, 1) = t.p122;
        j.h(1, 0) = t.p122;
        j.h(1, 1) = t.p222;
        return j;
    };
    return out;
}

PhiFunction theorem2_inverse(const CheckPhiFunction& vphi, double C) {
    CheckPhiFunction v = vphi;
    PhiFunction phi;
    phi.name = "inverse(" + vphi.name + ")";
    phi.b2_sup = vphi.b2_sup;
    phi.grid_b2_lo = vphi.grid_b2_lo;
    phi.grid_b2_hi = vphi.grid_b2_hi;

    // 1/4 int_0^{b2} vphi_2(iota, 0) diota
    auto d_integral = [v](double b2) {
        auto integrand = [&](double iota) {
            Jet2 j = v.jet(iota, 0.0);
            return std::vector<double>{j.grad[1]};
        };
        return 0.25 * integrate<double>(integrand, 0.0, b2, 1)[0];
    };

    phi.psi_d = [v, d_integral, C](double b2, double s) {
        auto integrand = [&](double sig) {
            return std::vector<double>{v.value(b2, sig)};
        };
        double qs = integrate<double>(integrand, 0.0, s, 1)[0];
        return qs + d_integral(b2) + C;
    };
    phi.psi_j = [v, d_integral, C](double b2, double s) {
        auto integrand = [&](double sig) {
            Jet2 j = v.jet(b2, sig);
            return std::vector<double>{j.val, j.grad[0], j.h(0, 0)};
        };
        std::vector<double> q = integrate<double>(integrand, 0.0, s, 3);
        Jet2 here = v.jet(b2, s);
        Jet2 at0 = v.jet(b2, 0.0);
        Jet2 psi = Jet2::constant(q[0] + d_integral(b2) + C, 2);
        psi.grad[0] = q[1] + 0.25 * at0.grad[1];
        psi.grad[1] = here.val;
        psi.h(0, 0) = q[2] + 0.25 * at0.h(0, 1);
        psi.h(0, 1) = here.grad[0];
        psi.h(1, 0) = here.grad[0];
        psi.h(1, 1) = here.grad[1];
        return psi;
    };
    return phi;
}

double roundtrip_constant(const PhiFunction& phi) { return phi.psi_d(0.0, 0.0); }

// ---- grid scans -----------------------------------------------------------------

void GridScan::add(double b2, double s, double r) {
    ++evaluated;
    double a = std::abs(r);
    sum_abs += a;
    if (a > max_abs) {
        max_abs = a;
        worst = {b2, s, r};
    }
}

namespace {

template <class P, class F>
GridScan scan_grid(const P& p, const GridSpec& spec, F&& residual) {
    const double lo = spec.b2_lo.value_or(p.grid_b2_lo);
    const double hi = spec.b2_hi.value_or(p.grid_b2_hi);
    GridScan scan;
    for (int i = 0; i < spec.rows; ++i) {
        double b2 = lo + (hi - lo) * (i + 0.5) / spec.rows;
        double smax = (1.0 - spec.inset) * std::sqrt(b2);
        for (int j = 0; j < spec.cols; ++j) {
            double s = spec.cols == 1
                           ? 0.0
                           : -smax + 2.0 * smax * j / (spec.cols - 1);
            if (!p.in_domain(b2, s)) {
                ++scan.skipped;
                continue;
            }
            scan.add(b2, s, residual(b2, s));
        }
    }
    return scan;
}

} // namespace

GridScan scan_pde1(const PhiFunction& phi, const GridSpec& spec) {
    return scan_grid(phi, spec,
                     [&](double b2, double s) { return pde1_residual(phi, b2, s); });
}

GridScan scan_psi22(const PhiFunction& phi, const GridSpec& spec) {
    return scan_grid(phi, spec,
                     [&](double b2, double s) { return psi22_residual(phi, b2, s); });
}

GridScan scan_varphi(const CheckPhiFunction& vphi, const GridSpec& spec) {
    return scan_grid(vphi, spec,
                     [&](double b2, double s) { return varphi_residual(vphi, b2, s); });
}

GridScan scan_checkp(const CheckPhiFunction& vphi, const GridSpec& spec) {
    return scan_grid(vphi, spec,
                     [&](double b2, double s) { return checkp_residual(vphi, b2, s); });
}

// ---- positivity -----------------------------------------------------------------

PositivityReport finsler_positivity(const PhiFunction& phi, double b2_max, int rows,
                                    int cols, double inset) {
    PositivityReport rep;
    for (int i = 0; i < rows; ++i) {
        double b2 = b2_max * (i + 0.5) / rows;
        double smax = (1.0 - inset) * std::sqrt(b2);
        for (int j = 0; j < cols; ++j) {
            double s = cols == 1 ? 0.0 : -smax + 2.0 * smax * j / (cols - 1);
            if (!phi.in_domain(b2, s)) {
                ++rep.skipped;
                continue;
            }
            Jet2 p = phi.jet(b2, s);
            double strong = p.val - s * p.grad[1];
            double weak = strong + (b2 - s * s) * p.h(1, 1);
            ++rep.evaluated;
            if (strong < rep.min_strong) {
                rep.min_strong = strong;
                rep.argmin_strong = {b2, s};
            }
            if (weak < rep.min_weak) {
                rep.min_weak = weak;
                rep.argmin_weak = {b2, s};
            }
            if ((strong <= 0.0 || weak <= 0.0) && !rep.first_violation)
                rep.first_violation = {{b2, s}};
        }
    }
    return rep;
}

} // namespace dflat
