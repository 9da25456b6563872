#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "dflat/phifunc.hpp"
#include "dflat/rng.hpp"
#include "testutil.hpp"

using namespace dflat;
using dflat::testing::FiniteDiff;
using dflat::testing::rel_err;

namespace {

PhiFunction constant_phi(double v) {
    PhiFunction p;
    p.name = "const";
    p.grid_b2_hi = 1.5;
    p.psi_d = [v](double, double) { return v * v; };
    p.psi_j = [v](double, double) { return Jet2::constant(v * v, 2); };
    p.psi_t3 = [v](double, double) {
        Third t;
        t.p = v * v;
        return t;
    };
    return p;
}

} // namespace

TEST_CASE("pde1 residual: constants and the named catalog points") {
    PhiFunction one = constant_phi(1.0);
    CHECK(pde1_residual(one, 0.4, 0.2) == 0.0);

    // generalized Funk at (0.25, 0.1): phi = (sqrt(0.76)+0.1)/0.75
    PhiFunction funk = catalog_phi("funk");
    CHECK(funk.value(0.25, 0.1) ==
          doctest::Approx((std::sqrt(0.76) + 0.1) / 0.75).epsilon(1e-14));
    CHECK(std::abs(pde1_residual(funk, 0.25, 0.1)) < 1e-10);

    // example3 at (3, 1): phi = 3 sqrt(3), residual 0
    PhiFunction e3 = catalog_phi("example3");
    CHECK(e3.value(3.0, 1.0) == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-14));
    CHECK(std::abs(pde1_residual(e3, 3.0, 1.0)) < 1e-10);
    CHECK(e3.value(0.0, 0.0) == doctest::Approx(1.0));

    // example2 with kappa = 0, eps = 1/2 collapses to sqrt(1+s)
    PhiFunction flat = catalog_phi("example2", {{"kappa", 0.0}, {"eps", 0.5}});
    CHECK(flat.value(0.49, 0.3) == doctest::Approx(std::sqrt(1.3)).epsilon(1e-14));
}

TEST_CASE("every catalog phi satisfies pde1 on its grid") {
    for (const auto& name : catalog_phi_names()) {
        PhiFunction phi = catalog_phi(name);
        GridScan scan = scan_pde1(phi, {});
        INFO(name);
        CHECK(scan.evaluated > 200);
        CHECK(scan.max_abs < 1e-9);
    }
}

TEST_CASE("example8 satisfies pde1 for several branch parameters") {
    for (double p : {0.3, 1.0, 2.0}) {
        PhiFunction phi = catalog_phi("example8", {{"p", p}});
        GridScan scan = scan_pde1(phi, {});
        INFO("p = " << p);
        CHECK(scan.max_abs < 1e-8);
    }
    CHECK_THROWS_AS(catalog_phi("example8", {{"p", 4.0}}), Error);
}

TEST_CASE("psi22 residual is exactly twice pde1") {
    CounterRng rng(3);
    PhiFunction phi = catalog_phi("example4");
    const double eps4 = 4.0 * std::numeric_limits<double>::epsilon();
    long checked = 0;
    for (int k = 0; k < 200; ++k) {
        double b2 = 0.05 + rng.uniform01(k, 0);
        double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.99;
        if (!phi.in_domain(b2, s)) continue;
        double a = psi22_residual(phi, b2, s);
        double b = 2.0 * pde1_residual(phi, b2, s);
        double scale = 1.0 + std::abs(a) + std::abs(b);
        CHECK(std::abs(a - b) <= 8.0 * eps4 * scale);
        ++checked;
    }
    CHECK(checked > 50);
}

TEST_CASE("psi22 on generator output: f = 0 gives the pure-g family") {
    SolutionSpec spec;
    spec.f = [](const RTaylor3& t) { return 0.0 * t; };
    spec.g = [](const RTaylor3& t) { return 1.0 + t; };
    PhiFunction phi = phi_from_fg(spec, "example1-gen");
    phi.grid_b2_hi = 1.5;
    GridScan scan = scan_psi22(phi, {});
    CHECK(scan.max_abs < 1e-10);

    // matches the closed-form example1 entry pointwise
    PhiFunction e1 = catalog_phi("example1");
    for (double b2 : {0.2, 0.7, 1.2})
        for (double s : {-0.4, 0.0, 0.3}) {
            if (!e1.in_domain(b2, s)) continue;
            CHECK(phi.value(b2, s) == doctest::Approx(e1.value(b2, s)).epsilon(1e-12));
        }
}

TEST_CASE("varphi and checkp agree exactly and vanish on solutions") {
    CheckPhiFunction v = catalog_check("check_example3");
    CounterRng rng(9);
    for (int k = 0; k < 1000; ++k) {
        double b2 = 2.0 * rng.uniform01(k, 0) + 0.01;
        double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.999;
        double a = varphi_residual(v, b2, s);
        double b = checkp_residual(v, b2, s);
        CHECK(a == b); // identical polynomial, identical arithmetic
        CHECK(std::abs(a) < 1e-10);
    }

    CheckPhiFunction lin = catalog_check("check_linear");
    CHECK(varphi_residual(lin, 0.5, 0.3) == 0.0);
    CHECK(checkp_residual(lin, 0.5, 0.3) == 0.0);

    CheckPhiFunction c;
    c.name = "const";
    c.eval_d = [](double, double) { return 2.5; };
    c.eval_j = [](double, double) { return Jet2::constant(2.5, 2); };
    CHECK(varphi_residual(c, 0.4, 0.1) == 0.0);
}

TEST_CASE("generator reproduces example 3 through quadrature") {
    SolutionSpec spec;
    spec.f = [](const RTaylor3& t) { return 3.0 * (1.0 + t); };
    spec.g = [](const RTaylor3& t) { return pow(1.0 + t, 1.5); };
    PhiFunction phi = phi_from_fg(spec, "example3-gen");
    phi.grid_b2_hi = 3.5;

    CHECK(phi.value(3.0, 1.0) == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-10));

    PhiFunction closed = catalog_phi("example3");
    CounterRng rng(21);
    for (int k = 0; k < 50; ++k) {
        double b2 = 3.4 * rng.uniform01(k, 0) + 0.01;
        double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.99;
        CHECK(rel_err(phi.value(b2, s), closed.value(b2, s)) < 1e-9);
    }
    GridScan scan = scan_pde1(phi, {.rows = 15, .cols = 15});
    CHECK(scan.max_abs < 1e-8);
}

TEST_CASE("generator reproduces example 2 (kappa = 1, eps = 1) through quadrature") {
    SolutionSpec spec;
    spec.f = [](const RTaylor3& t) { return 2.0 / pow(1.0 - t, 1.5); };
    spec.g = [](const RTaylor3& t) { return 1.0 / (1.0 - t); };
    PhiFunction phi = phi_from_fg(spec, "funk-gen", 1.0);
    phi.grid_b2_hi = 0.81;

    CHECK(phi.value(0.25, 0.1) ==
          doctest::Approx((std::sqrt(0.76) + 0.1) / 0.75).epsilon(1e-9));

    PhiFunction closed = catalog_phi("funk");
    for (double b2 : {0.1, 0.4, 0.7})
        for (double s : {-0.2, 0.0, 0.25}) {
            if (!closed.in_domain(b2, s)) continue;
            CHECK(rel_err(phi.value(b2, s), closed.value(b2, s)) < 1e-9);
        }
}

TEST_CASE("generator: trivial spec gives phi == 1") {
    SolutionSpec spec;
    spec.f = [](const RTaylor3& t) { return 0.0 * t; };
    spec.g = [](const RTaylor3& t) { return 1.0 + 0.0 * t; };
    PhiFunction phi = phi_from_fg(spec, "one");
    CHECK(phi.value(0.5, 0.2) == doctest::Approx(1.0));
    Jet2 j = phi.jet(0.5, 0.2);
    for (double g : j.grad) CHECK(std::abs(g) < 1e-14);
}

TEST_CASE("generator psi jets agree with finite differences of the quadrature value") {
    SolutionSpec spec;
    spec.f = [](const RTaylor3& t) { return 2.0 / sqrt(1.0 + t); };
    spec.g = [](const RTaylor3& t) { return log(sqrt(1.0 + t)); };
    PhiFunction phi = phi_from_fg(spec, "example4-gen");

    FiniteDiff fd;
    auto val = [&phi](const std::vector<double>& p) { return phi.psi_d(p[0], p[1]); };
    for (auto [b2, s] : std::vector<std::pair<double, double>>{
             {0.5, 0.3}, {0.9, 0.5}, {0.7, -0.2}}) {
        Jet2 j = phi.psi_j(b2, s);
        std::vector<double> at{b2, s};
        auto g = fd.grad(val, at);
        auto H = fd.hess(val, at);
        CHECK(rel_err(j.grad[0], g[0]) < 1e-6);
        CHECK(rel_err(j.grad[1], g[1]) < 1e-6);
        CHECK(rel_err(j.h(0, 0), H[0]) < 1e-6);
        CHECK(rel_err(j.h(0, 1), H[1]) < 1e-6);
        CHECK(rel_err(j.h(1, 1), H[3]) < 1e-6);
    }

    PhiFunction closed = catalog_phi("example4");
    for (double b2 : {0.3, 0.8})
        for (double s : {0.2, 0.45}) {
            if (!closed.in_domain(b2, s)) continue;
            CHECK(rel_err(phi.value(b2, s), closed.value(b2, s)) < 1e-10);
        }
}

TEST_CASE("generator matches examples 5, 6, 7 closed forms") {
    struct Case {
        const char* name;
        SolutionSpec spec;
        double sup;
    };
    std::vector<Case> cases;
    {
        SolutionSpec s5;
        s5.f = [](const RTaylor3& t) { return 2.0 / sqrt(1.0 - t); };
        s5.g = [](const RTaylor3& t) { return log(sqrt(1.0 - t)); };
        cases.push_back({"example5", s5, 1.0});
        SolutionSpec s6;
        s6.f = [](const RTaylor3& t) { return 4.0 * sqrt(1.0 + t); };
        s6.g = [](const RTaylor3& t) { return 1.0 + 0.0 * t; };
        cases.push_back({"example6", s6, std::numeric_limits<double>::infinity()});
        SolutionSpec s7;
        s7.f = [](const RTaylor3& t) { return 4.0 * sqrt(1.0 - t); };
        s7.g = [](const RTaylor3& t) { return 1.0 + 0.5 * (1.0 - t) * log(1.0 - t); };
        cases.push_back({"example7", s7, 1.0});
    }
    for (auto& cs : cases) {
        PhiFunction gen = phi_from_fg(cs.spec, std::string(cs.name) + "-gen", cs.sup);
        PhiFunction closed = catalog_phi(cs.name);
        INFO(cs.name);
        long matched = 0;
        CounterRng rng(55);
        for (int k = 0; k < 60; ++k) {
            double b2 = closed.grid_b2_hi * rng.uniform01(k, 0) + 1e-3;
            double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.99;
            if (!closed.in_domain(b2, s)) continue;
            CHECK(rel_err(gen.value(b2, s), closed.value(b2, s)) < 1e-9);
            ++matched;
        }
        CHECK(matched > 15);
    }
}

TEST_CASE("complex generator matches the example 8 closed form") {
    using C = std::complex<double>;
    for (double p : {0.3, 1.0, 2.0}) {
        const C eip = std::exp(C(0.0, p));
        ComplexSolutionSpec spec;
        spec.f = [eip](const CTaylor3& t) { return C(0.0, 2.0) / sqrt(eip + t); };
        spec.g = [eip](const CTaylor3& t) { return log(sqrt(eip + t)); };
        PhiFunction gen = phi_from_fg_complex(spec, "example8-gen", 1.0);
        PhiFunction closed = catalog_phi("example8", {{"p", p}});
        INFO("p = " << p);
        long matched = 0;
        CounterRng rng(66);
        for (int k = 0; k < 40; ++k) {
            double b2 = 0.8 * rng.uniform01(k, 0) + 1e-3;
            double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.99;
            if (!closed.in_domain(b2, s)) continue;
            CHECK(rel_err(gen.value(b2, s), closed.value(b2, s)) < 1e-9);
            ++matched;
        }
        CHECK(matched > 10);
        gen.grid_b2_hi = 0.81;
        GridScan scan = scan_pde1(gen, {.rows = 10, .cols = 10});
        CHECK(scan.max_abs < 1e-8);
    }
}

TEST_CASE("randomized (f, g) pairs from polynomial/rational families solve pde1") {
    CounterRng rng(2024);
    int built = 0;
    for (int trial = 0; trial < 20; ++trial) {
        double c1 = rng.symmetric(trial, 0), c2 = rng.symmetric(trial, 1);
        double c3 = rng.uniform01(trial, 2), kind = rng.uniform01(trial, 3);
        SolutionSpec spec;
        if (kind < 0.5) {
            spec.f = [c1, c2](const RTaylor3& t) { return c1 + c2 * t + 0.3 * t * t; };
        } else {
            spec.f = [c1, c3](const RTaylor3& t) { return c1 / (2.0 + c3 * t); };
        }
        spec.g = [c3](const RTaylor3& t) { return 1.0 + 0.5 * c3 * t * t + 0.2 * t; };
        PhiFunction phi = phi_from_fg(spec, "random-fg");
        phi.grid_b2_hi = 1.0;
        GridScan scan = scan_pde1(phi, {.rows = 12, .cols = 12});
        INFO("trial " << trial);
        CHECK(scan.evaluated > 30);
        CHECK(scan.max_abs < 1e-8);
        ++built;
    }
    CHECK(built == 20);
}

TEST_CASE("forward map: example 3 gives the section-6 pair") {
    PhiFunction e3 = catalog_phi("example3");
    CheckPhiFunction fwd = theorem2_forward(e3);
    CheckPhiFunction closed = catalog_check("check_example3");
    CounterRng rng(12);
    for (int k = 0; k < 100; ++k) {
        double b2 = 3.0 * rng.uniform01(k, 0) + 0.01;
        double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.999;
        CHECK(rel_err(fwd.value(b2, s), closed.value(b2, s)) < 1e-12);
    }
    GridScan scan = scan_checkp(fwd, {.rows = 20, .cols = 20});
    CHECK(scan.max_abs < 1e-9);
}

TEST_CASE("forward map of every catalog entry satisfies checkp") {
    for (const auto& name : catalog_phi_names()) {
        PhiFunction phi = catalog_phi(name);
        CheckPhiFunction fwd = theorem2_forward(phi);
        GridScan scan = scan_checkp(fwd, {.rows = 15, .cols = 15});
        INFO(name);
        CHECK(scan.evaluated > 50);
        CHECK(scan.max_abs < 1e-9);
    }
}

TEST_CASE("forward map rejects a perturbed (non-solution) phi") {
    PhiFunction bad = catalog_phi("example3").perturbed(0.01);
    CHECK_THROWS_AS(theorem2_forward(bad), Error);
}

TEST_CASE("degenerate forward map: phi == 1 maps to vphi == 0") {
    PhiFunction one = constant_phi(1.0);
    CheckPhiFunction fwd = theorem2_forward(one);
    CHECK(fwd.value(0.5, 0.2) == 0.0);
    CHECK(fwd.value(1.0, -0.4) == 0.0);
}

TEST_CASE("inverse of the section-6 check phi reproduces example 3 analytically") {
    CheckPhiFunction v = catalog_check("check_example3");
    PhiFunction phi = theorem2_inverse(v, 1.0);
    PhiFunction closed = catalog_phi("example3");
    CounterRng rng(13);
    for (int k = 0; k < 50; ++k) {
        double b2 = 3.0 * rng.uniform01(k, 0) + 0.01;
        double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.999;
        CHECK(rel_err(phi.value(b2, s), closed.value(b2, s)) < 1e-9);
    }
    phi.grid_b2_hi = 3.5;
    GridScan scan = scan_pde1(phi, {.rows = 10, .cols = 10});
    CHECK(scan.max_abs < 1e-8);
}

TEST_CASE("inverse of vphi == 0 with C = 1 is phi == 1") {
    CheckPhiFunction zero;
    zero.name = "zero";
    zero.eval_d = [](double, double) { return 0.0; };
    zero.eval_j = [](double, double) { return Jet2::constant(0.0, 2); };
    PhiFunction phi = theorem2_inverse(zero, 1.0);
    CHECK(phi.value(0.7, -0.3) == doctest::Approx(1.0));
}

TEST_CASE("round trip with C* = phi(0,0)^2 over the full catalog") {
    for (const auto& name : catalog_phi_names()) {
        PhiFunction phi = catalog_phi(name);
        CheckPhiFunction fwd = theorem2_forward(phi);
        double cstar = roundtrip_constant(phi);
        PhiFunction back = theorem2_inverse(fwd, cstar);
        INFO(name);
        long compared = 0;
        CounterRng rng(31);
        for (int k = 0; k < 40 && compared < 25; ++k) {
            double b2 = phi.grid_b2_lo +
                        (phi.grid_b2_hi - phi.grid_b2_lo) * rng.uniform01(k, 0) + 1e-3;
            double s = std::sqrt(b2) * rng.symmetric(k, 1) * 0.99;
            if (!phi.in_domain(b2, s)) continue;
            CHECK(std::abs(phi.value(b2, s) - back.value(b2, s)) < 1e-8);
            ++compared;
        }
        CHECK(compared >= 10);
    }
}

TEST_CASE("positivity scans") {
    PhiFunction one = constant_phi(1.0);
    PositivityReport rep1 = finsler_positivity(one, 1.0, 50, 50);
    CHECK(rep1.min_strong == doctest::Approx(1.0));
    CHECK(rep1.min_weak == doctest::Approx(1.0));
    CHECK(rep1.ok_n3());

    PhiFunction funk = catalog_phi("funk");
    PositivityReport repf = finsler_positivity(funk, 0.81);
    CHECK(repf.ok_n3());
    CHECK_FALSE(repf.first_violation.has_value());

    PhiFunction e3 = catalog_phi("example3");
    PositivityReport rep3 = finsler_positivity(e3, 1.0);
    CHECK(rep3.ok_n3());
    CHECK(rep3.min_strong > 0.0);
    CHECK(rep3.evaluated > 30000);
}

TEST_CASE("perturbed phi fails pde1 beyond the detection threshold") {
    for (const char* name : {"example3", "funk"}) {
        PhiFunction bad = catalog_phi(std::string(name) + "-perturbed");
        GridScan scan = scan_pde1(bad, {});
        INFO(name);
        CHECK(scan.max_abs > 1e-4);
    }
}

TEST_CASE("domain handling") {
    PhiFunction funk = catalog_phi("funk");
    CHECK_THROWS_AS(funk.value(1.0, 0.0), Error);     // b_o itself is excluded
    CHECK_THROWS_AS(funk.value(0.25, 0.6), Error);    // |s| > b
    CHECK_THROWS_AS(funk.value(-0.1, 0.0), Error);
    CHECK(funk.in_domain(0.25, 0.3));
    CHECK_FALSE(funk.in_domain(0.25, 0.6));
    CHECK_FALSE(funk.in_domain(1.2, 0.1));

    // example5's radicand region excludes most s < 0
    PhiFunction e5 = catalog_phi("example5");
    CHECK(e5.in_domain(0.25, 0.3));
    CHECK_FALSE(e5.in_domain(0.25, -0.45));

    CHECK_THROWS_AS(catalog_phi("nonsense"), Error);
    CHECK_THROWS_AS(catalog_check("nonsense"), Error);
}

TEST_CASE("quadrature-built general check-phi solution satisfies varphi") {
    // vphi = h s + f(b^2-s^2) + 2 s int_0^s f'(b^2-sigma^2), with f = t^2, h = t
    CheckPhiFunction v = check_from_hf(
        [](const RTaylor3& t) { return t * t; }, [](const RTaylor3& t) { return t; },
        "hf-quadrature");
    v.grid_b2_hi = 1.5;
    GridScan scan = scan_varphi(v, {.rows = 15, .cols = 15});
    CHECK(scan.evaluated > 100);
    CHECK(scan.max_abs < 1e-8);

    // closed form at one point: f' = 2t, int_0^s 2(b2-sig^2) = 2 b2 s - 2 s^3/3
    double b2 = 0.5, s = 0.3;
    double want = b2 * s + std::pow(b2 - s * s, 2.0) +
                  2.0 * s * (2.0 * b2 * s - 2.0 * s * s * s / 3.0);
    CHECK(v.value(b2, s) == doctest::Approx(want).epsilon(1e-12));

    // jets vs finite differences of the quadrature value
    FiniteDiff fd;
    auto val = [&v](const std::vector<double>& p) { return v.value(p[0], p[1]); };
    Jet2 j = v.jet(b2, s);
    auto g = fd.grad(val, {b2, s});
    auto H = fd.hess(val, {b2, s});
    CHECK(rel_err(j.grad[0], g[0]) < 1e-6);
    CHECK(rel_err(j.grad[1], g[1]) < 1e-6);
    CHECK(rel_err(j.h(0, 0), H[0]) < 1e-6);
    CHECK(rel_err(j.h(0, 1), H[1]) < 1e-6);
    CHECK(rel_err(j.h(1, 1), H[3]) < 1e-6);
}

TEST_CASE("psi22 residual of the example-4 pair at the named point") {
    PhiFunction e4 = catalog_phi("example4");
    CHECK(std::abs(psi22_residual(e4, 0.5, 0.3)) < 1e-9);
}
