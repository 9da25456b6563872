#include <complex>
#include <limits>

#include "dflat/phifunc.hpp"

namespace dflat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Third third_from_nested(const Jet<Jet2>& out) {
    Third t;
    t.p = out.val.val;
    t.p1 = out.val.grad[0];
    t.p2 = out.val.grad[1];
    t.p11 = out.val.h(0, 0);
    t.p12 = out.val.h(0, 1);
    t.p22 = out.val.h(1, 1);
    t.p111 = out.grad[0].h(0, 0);
    t.p112 = out.grad[0].h(0, 1);
    t.p122 = out.grad[0].h(1, 1);
    t.p222 = out.grad[1].h(1, 1);
    return t;
}

// Entry from a generic radicand expression; the same lambda is instantiated
// at doubles, 2-variable jets and nested jets.
template <class F>
PhiFunction from_psi(std::string name, double b2_sup, double lo, double hi, F expr) {
    PhiFunction p;
    p.name = std::move(name);
    p.b2_sup = b2_sup;
    p.grid_b2_lo = lo;
    p.grid_b2_hi = hi;
    p.psi_d = [expr](double b2, double s) -> double { return expr(b2, s); };
    p.psi_j = [expr](double b2, double s) {
        return expr(Jet2::variable(b2, 2, 0), Jet2::variable(s, 2, 1));
    };
    p.psi_t3 = [expr](double b2, double s) {
        using JJ = Jet<Jet2>;
        JJ B = JJ::variable(Jet2::variable(b2, 2, 0), 2, 0);
        JJ S = JJ::variable(Jet2::variable(s, 2, 1), 2, 1);
        return third_from_nested(expr(B, S));
    };
    return p;
}

template <class F>
CheckPhiFunction check_from_expr(std::string name, double b2_sup, double lo, double hi,
                                 F expr) {
    CheckPhiFunction c;
    c.name = std::move(name);
    c.b2_sup = b2_sup;
    c.grid_b2_lo = lo;
    c.grid_b2_hi = hi;
    c.eval_d = [expr](double b2, double s) -> double { return expr(b2, s); };
    c.eval_j = [expr](double b2, double s) {
        return expr(Jet2::variable(b2, 2, 0), Jet2::variable(s, 2, 1));
    };
    return c;
}

double param(const ParamMap& params, const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
}

PhiFunction make_example1(const ParamMap& params) {
    // g(t) = ga + gb t, so psi = g(b2) + 2 g'(b2) s^2
    double ga = param(params, "ga", 1.0);
    double gb = param(params, "gb", 1.0);
    return from_psi("example1", kInf, 0.0, 1.5, [ga, gb](const auto& b2, const auto& s) {
        return ga + gb * b2 + 2.0 * gb * s * s;
    });
}

PhiFunction make_example2(const ParamMap& params, std::string name, double dk, double de) {
    double k = param(params, "kappa", dk);
    double e = param(params, "eps", de);
    double sup = k > 0.0 ? 1.0 / k : kInf;
    double hi = k > 0.0 ? 0.81 / k : 1.5;
    return from_psi(std::move(name), sup, 0.0, hi, [k, e](const auto& b2, const auto& s) {
        auto base = 1.0 - k * b2;
        auto root = sqrt(base + k * s * s);
        return (base + 2.0 * k * s * s + 2.0 * e * s * root) / (base * base);
    });
}

PhiFunction make_example3() {
    return from_psi("example3", kInf, 0.0, 3.5, [](const auto& b2, const auto& s) {
        return pow(sqrt(1.0 + b2) + s, 3.0);
    });
}

PhiFunction make_example4() {
    return from_psi("example4", kInf, 0.0, 1.2, [](const auto& b2, const auto& s) {
        auto q = 1.0 + b2;
        auto rq = sqrt(q);
        return log(rq) + asin(s / rq) + s * (sqrt(q - s * s) + s) / q;
    });
}

PhiFunction make_example5() {
    // radicand by Prop 5.1 with f = 2/sqrt(1-t), g = ln sqrt(1-t); the ln of
    // the paper's display is absorbed: g + arcsinh(s/sqrt(1-b2)) =
    // ln(s + sqrt(1-b2+s^2))
    return from_psi("example5", 1.0, 0.0, 0.81, [](const auto& b2, const auto& s) {
        auto r = sqrt(1.0 - b2 + s * s);
        return log(s + r) + s / (r + s);
    });
}

PhiFunction make_example6() {
    return from_psi("example6", kInf, 0.0, 1.2, [](const auto& b2, const auto& s) {
        auto q = 1.0 + b2;
        return 1.0 + 3.0 * s * sqrt(q - s * s) + (q + 2.0 * s * s) * asin(s / sqrt(q));
    });
}

PhiFunction make_example7() {
    // f = 4 sqrt(1-t), g = 1 + (1-t) ln(1-t)/2; radicand from Prop 5.1
    return from_psi("example7", 1.0, 0.0, 0.81, [](const auto& b2, const auto& s) {
        auto q = 1.0 - b2;
        auto r = sqrt(q + s * s);
        return 1.0 - s * s + 3.0 * s * r + (q - 2.0 * s * s) * log(s + r);
    });
}

PhiFunction make_example8(const ParamMap& params) {
    using C = std::complex<double>;
    double p = param(params, "p", 1.0);
    if (!(p > 0.0 && p < M_PI))
        fail(ErrorKind::input, "example8 requires p in (0, pi)");
    const C eip = std::exp(C(0.0, p));
    auto cexpr = [eip](const auto& b2, const auto& s) {
        const C i(0.0, 1.0);
        auto r = sqrt(eip + b2 - s * s);
        return log(sqrt(eip + b2)) + i * atan(s / r) + i * s / (r + i * s);
    };
    PhiFunction phi;
    phi.name = "example8";
    phi.b2_sup = 1.0;
    phi.grid_b2_lo = 0.0;
    phi.grid_b2_hi = 0.81;
    phi.psi_d = [cexpr](double b2, double s) { return cexpr(C(b2), C(s)).real(); };
    phi.psi_j = [cexpr](double b2, double s) {
        CJet2 B = CJet2::variable(C(b2), 2, 0);
        CJet2 S = CJet2::variable(C(s), 2, 1);
        return real_part(cexpr(B, S));
    };
    phi.psi_t3 = [cexpr](double b2, double s) {
        using CJJ = Jet<CJet2>;
        CJJ B = CJJ::variable(CJet2::variable(C(b2), 2, 0), 2, 0);
        CJJ S = CJJ::variable(CJet2::variable(C(s), 2, 1), 2, 1);
        return third_from_nested(real_part(cexpr(B, S)));
    };
    return phi;
}

PhiFunction make_randers() {
    // the dually flat Randers family: phi = (1+b2)^(1/4) + s (1+b2)^(-1/4),
    // i.e. f = 2, g = sqrt(1+t)
    return from_psi("randers", kInf, 0.0, 2.0, [](const auto& b2, const auto& s) {
        auto rq = sqrt(1.0 + b2);
        return rq + 2.0 * s + s * s / rq;
    });
}

PhiFunction make_navigation() {
    // navigation-form Randers phi: (sqrt(1-b2+s^2) - s)/(1-b2), rationalized
    // to 1/(sqrt(1-b2+s^2) + s) to dodge the cancellation as b2 -> 1
    return from_psi("randers_navigation", 1.0, 0.0, 0.81,
                    [](const auto& b2, const auto& s) {
                        auto den = sqrt(1.0 - b2 + s * s) + s;
                        return 1.0 / (den * den);
                    });
}

CheckPhiFunction make_check_example3() {
    return check_from_expr("check_example3", kInf, 0.0, 3.5,
                           [](const auto& b2, const auto& s) {
                               auto t = sqrt(1.0 + b2) + s;
                               return 3.0 * t * t;
                           });
}

CheckPhiFunction make_check_linear() {
    return check_from_expr("check_linear", kInf, 0.0, 1.5,
                           [](const auto& b2, const auto& s) { return s + 0.0 * b2; });
}

} // namespace

std::vector<std::string> catalog_phi_names() {
    return {"example1", "example2", "example3", "example4",
            "example5", "example6", "example7", "example8",
            "funk",     "randers",  "randers_navigation", "sqrt_alpha_alpha_beta"};
}

std::vector<std::string> catalog_check_names() {
    return {"check_example3", "check_linear"};
}

PhiFunction catalog_phi(const std::string& name, const ParamMap& params) {
    const std::string suffix = "-perturbed";
    if (name.size() > suffix.size() &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return catalog_phi(name.substr(0, name.size() - suffix.size()), params)
            .perturbed(param(params, "perturb", 0.01));
    }
    if (name == "example1") return make_example1(params);
    if (name == "example2") return make_example2(params, "example2", 1.0, 1.0);
    if (name == "funk") return make_example2(params, "funk", 1.0, 1.0);
    if (name == "sqrt_alpha_alpha_beta") {
        PhiFunction p = make_example2({}, "sqrt_alpha_alpha_beta", 0.0, 0.5);
        p.grid_b2_lo = 0.0;
        p.grid_b2_hi = 0.9;
        p.b2_sup = 1.0;
        return p;
    }
    if (name == "example3") return make_example3();
    if (name == "example4") return make_example4();
    if (name == "example5") return make_example5();
    if (name == "example6") return make_example6();
    if (name == "example7") return make_example7();
    if (name == "example8") return make_example8(params);
    if (name == "randers") return make_randers();
    if (name == "randers_navigation") return make_navigation();
    fail(ErrorKind::input, "unknown phi catalog name '" + name + "'");
}

CheckPhiFunction catalog_check(const std::string& name, const ParamMap&) {
    if (name == "check_example3") return make_check_example3();
    if (name == "check_linear") return make_check_linear();
    fail(ErrorKind::input, "unknown check-phi catalog name '" + name + "'");
}

} // namespace dflat
