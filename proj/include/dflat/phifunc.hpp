#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dflat/jet.hpp"
#include "dflat/taylor.hpp"

namespace dflat {

// Third-order partial data of a two-variable function (variable 0 is b^2,
// variable 1 is s). Extracted from nested jets.
struct Third {
    double p = 0, p1 = 0, p2 = 0;
    double p11 = 0, p12 = 0, p22 = 0;
    double p111 = 0, p112 = 0, p122 = 0, p222 = 0;
};

// phi(b^2, s) represented through its square psi = phi^2: all catalog entries
// have clean radicands, and the forward map (phi^2)_2 needs psi derivatives,
// which stay regular where phi itself degenerates to 0.
class PhiFunction {
public:
    std::string name;
    double b2_sup = std::numeric_limits<double>::infinity(); // strict bound on b^2
    double margin = 0.1;        // minimum phi accepted by in_domain
    double perturb_s3 = 0.0;    // additive c*s^3 applied to phi (test oracle)
    double grid_b2_lo = 0.0;    // default residual-grid window
    double grid_b2_hi = 1.0;

    std::function<double(double, double)> psi_d;
    std::function<Jet2(double, double)> psi_j;
    std::function<Third(double, double)> psi_t3; // may be empty

    bool has_third_order() const { return static_cast<bool>(psi_t3) && perturb_s3 == 0.0; }

    double value(double b2, double s) const;
    // full 2-variable jet of phi at (b^2, s); throws domain errors outside
    // |s| <= b < b_o or where the radicand is non-positive
    Jet2 jet(double b2, double s) const;
    Third psi_third(double b2, double s) const;

    // quiet predicate: point inside the cone, below b2_sup, radicand held
    // above margin^2
    bool in_domain(double b2, double s) const noexcept;

    PhiFunction perturbed(double c = 0.01) const;
};

// check-phi (the projective side); represented directly, no square root.
class CheckPhiFunction {
public:
    std::string name;
    double b2_sup = std::numeric_limits<double>::infinity();
    double grid_b2_lo = 0.0;
    double grid_b2_hi = 1.0;

    std::function<double(double, double)> eval_d;
    std::function<Jet2(double, double)> eval_j;

    double value(double b2, double s) const;
    Jet2 jet(double b2, double s) const;
    bool in_domain(double b2, double s) const noexcept;
};

// ---- PDE residuals -------------------------------------------------------------

// phi_2^2 + phi phi_22 + 2 s phi_1 phi_2 + 2 s phi phi_12 - 4 phi phi_1
double pde1_residual(const PhiFunction& phi, double b2, double s);
double pde1_residual_normalized(const PhiFunction& phi, double b2, double s);

// psi_22 + 2 s psi_12 - 4 psi_1 with psi = phi^2 built by jet multiplication
double psi22_residual(const PhiFunction& phi, double b2, double s);

// vphi_22 + 2 s vphi_12 - 2 vphi_1
double varphi_residual(const CheckPhiFunction& vphi, double b2, double s);
// vphi_22 - 2 (vphi_1 - s vphi_12): same polynomial, kept as the named alias
double checkp_residual(const CheckPhiFunction& vphi, double b2, double s);

// ---- solution generator and the two theorem maps -------------------------------

struct SolutionSpec {
    std::function<RTaylor3(const RTaylor3&)> f;
    std::function<RTaylor3(const RTaylor3&)> g;
    double C = 0.0; // only the inversion uses it
};

struct ComplexSolutionSpec {
    std::function<CTaylor3(const CTaylor3&)> f;
    std::function<CTaylor3(const CTaylor3&)> g;
};

// phi = sqrt(g + 2 g' s^2 + s f(b^2-s^2) + integral_0^s (s^2+sigma^2) f'(b^2-sigma^2) dsigma),
// the integral by adaptive quadrature with the s-dependence of the limit
// assembled through explicit boundary terms.
PhiFunction phi_from_fg(const SolutionSpec& spec, std::string name = "phi_from_fg",
                        double b2_sup = std::numeric_limits<double>::infinity());

// same construction over complex f, g; the radicand's real part is the phi^2
PhiFunction phi_from_fg_complex(const ComplexSolutionSpec& spec,
                                std::string name = "phi_from_fg_complex",
                                double b2_sup = std::numeric_limits<double>::infinity());

// general solution of the check-phi PDE:
// vphi = h(b^2) s + f(b^2-s^2) + 2 s integral_0^s f'(b^2-sigma^2) dsigma
CheckPhiFunction check_from_hf(std::function<RTaylor3(const RTaylor3&)> f,
                               std::function<RTaylor3(const RTaylor3&)> h,
                               std::string name = "check_from_hf",
                               double b2_sup = std::numeric_limits<double>::infinity());

// vphi = (phi^2)_2; requires third-order psi data and a pde1 probe pass
CheckPhiFunction theorem2_forward(const PhiFunction& phi, double probe_tol = 1e-7);

// phi = sqrt(int_0^s vphi(b^2,.) + 1/4 int_0^{b^2} vphi_2(.,0) + C)
PhiFunction theorem2_inverse(const CheckPhiFunction& vphi, double C);

// the constant that closes the round trip: psi(0,0) = phi(0,0)^2
double roundtrip_constant(const PhiFunction& phi);

// ---- grid scans ----------------------------------------------------------------

struct GridSpec {
    int rows = 50, cols = 50;
    double inset = 1e-3;                 // |s| <= (1-inset) b
    std::optional<double> b2_lo, b2_hi;  // default: the entry's window
};

struct GridScan {
    long evaluated = 0;
    long skipped = 0;
    double max_abs = 0.0;
    double sum_abs = 0.0;
    std::optional<std::array<double, 3>> worst; // (b2, s, residual)

    double mean_abs() const { return evaluated ? sum_abs / evaluated : 0.0; }
    void add(double b2, double s, double r);
};

GridScan scan_pde1(const PhiFunction& phi, const GridSpec& spec = {});
GridScan scan_psi22(const PhiFunction& phi, const GridSpec& spec = {});
GridScan scan_varphi(const CheckPhiFunction& vphi, const GridSpec& spec = {});
GridScan scan_checkp(const CheckPhiFunction& vphi, const GridSpec& spec = {});

// ---- positivity ----------------------------------------------------------------

struct PositivityReport {
    double min_strong = std::numeric_limits<double>::infinity(); // phi - s phi_2
    double min_weak = std::numeric_limits<double>::infinity();   // + (b^2-s^2) phi_22
    std::array<double, 2> argmin_strong{}, argmin_weak{};
    std::optional<std::array<double, 2>> first_violation;
    long evaluated = 0, skipped = 0;

    bool ok_n3() const { return min_strong > 0.0 && min_weak > 0.0; }
    bool ok_n2() const { return min_weak > 0.0; }
};

PositivityReport finsler_positivity(const PhiFunction& phi, double b2_max,
                                    int rows = 200, int cols = 200, double inset = 1e-3);

// ---- catalog -------------------------------------------------------------------

using ParamMap = std::map<std::string, double>;

std::vector<std::string> catalog_phi_names();
std::vector<std::string> catalog_check_names();

// known names: example1..example8, funk, randers, randers_navigation,
// sqrt_alpha_alpha_beta; any name + "-perturbed" applies the +0.01 s^3 oracle
PhiFunction catalog_phi(const std::string& name, const ParamMap& params = {});
CheckPhiFunction catalog_check(const std::string& name, const ParamMap& params = {});

} // namespace dflat
