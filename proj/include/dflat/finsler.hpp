#pragma once

#include <optional>
#include <vector>

#include "dflat/fields.hpp"
#include "dflat/phifunc.hpp"

namespace dflat {

struct GeneralABMetric {
    RiemannianMetric alpha;
    OneForm beta;
    PhiFunction phi;
};

// One joint-jet pass through F = alpha * phi(b^2, beta/alpha); everything
// downstream (flatness residuals, fundamental tensor, spray, identities)
// reads off this record. Jets are over the 2n variables (x, y).
struct AssembledEval {
    int n = 0;
    std::vector<double> x, y;
    Jet2 F;  // alpha * phi
    Jet2 F2; // F^2
    Jet2 alpha, beta, b2, s;
    Mat<double> a;              // a_ij(x)
    std::vector<double> b_form; // b_i(x)
    Jet2 phi2;                  // 2-variable jet of phi at (b^2, s)
};

// phi-like: PhiFunction or CheckPhiFunction (both expose jet/value/in_domain)
template <class P>
AssembledEval assemble(const RiemannianMetric& alpha, const OneForm& beta, const P& phi,
                       const std::vector<double>& x, const std::vector<double>& y);

// b^2 and s at the value level, for samplers and domain rejection
struct ScalarPair {
    double b2 = 0, s = 0;
};
ScalarPair b2_and_s(const RiemannianMetric& alpha, const OneForm& beta,
                    const std::vector<double>& x, const std::vector<double>& y);

// [F^2]_{x^k y^l} y^k - 2 [F^2]_{x^l}, per component
std::vector<double> dual_flat_residual(const AssembledEval& e);
std::vector<double> dual_flat_residual_normalized(const AssembledEval& e);

// Hamel: F_{x^k y^l} y^k - F_{x^l}, per component
std::vector<double> projective_flat_residual(const AssembledEval& e);

Mat<double> fundamental_tensor(const AssembledEval& e);
std::vector<double> spray_finsler(const AssembledEval& e);

// ---- structure identities of the Theorem 1.2 proof ------------------------------

struct StructureReport {
    double res_rij = 0;      // r_ij = c a_ij + theta_i b_j + theta_j b_i
    double res_sij = 0;      // s_ij = theta_i b_j - theta_j b_i
    double res_b2_rs = 0;    // (b^2)_{x^l} = 2 (r_l + s_l)      [unconditional]
    double res_b2_cbar = 0;  // (b^2)_{x^l} = 2 cbar b_l
    double res_alpha_xl = 0; // alpha_{x^l} = 2/alpha (alpha^2 theta_l + 2 theta y_l)
    double res_beta_xl = 0;  // beta_{x^l} = cbar y_l + 2 beta theta_l + 4 theta b_l
    double res_s_yl = 0;     // s_{y^l} = (alpha b_l - s y_l)/alpha^2  [unconditional]
    double c_bar = 0;

    double max_conditional() const;
    double max_all() const;
};

// Precondition: conditions (3) hold to pre_tol at (x, y); violations raise a
// contract error naming the failing condition.
StructureReport structure_identities(const RiemannianMetric& alpha, const OneForm& beta,
                                     const DuallyFlatData& data,
                                     const std::vector<double>& x,
                                     const std::vector<double>& y,
                                     double pre_tol = 1e-8);

// the unconditional identity subset, valid for arbitrary (alpha, beta)
struct UnconditionalReport {
    double res_b2_rs = 0;
    double res_s_yl = 0;
};
UnconditionalReport unconditional_identities(const RiemannianMetric& alpha,
                                             const OneForm& beta,
                                             const std::vector<double>& x,
                                             const std::vector<double>& y);

// ---- Theorem 1.2 equivalence ------------------------------------------------------

// componentwise factorization of the dual-flatness residual:
// [F^2]_{x^k y^l} y^k - 2 [F^2]_{x^l} = 2 alpha cbar (pde1 expr) (alpha b_l - s y_l)
struct FactorizationSample {
    std::vector<double> lhs;       // dual-flat residual components
    std::vector<double> rhs;       // assembled right side
    double mismatch = 0;           // max |lhs - rhs|
    double pde1 = 0;               // pde1 expression value at (b^2, s)
    double c_bar = 0;
};

FactorizationSample factorization_sample(const GeneralABMetric& m,
                                         const DuallyFlatData& data,
                                         const std::vector<double>& x,
                                         const std::vector<double>& y);

// Both directions of the Theorem 1.2 equivalence over a sample grid:
// (i)  a pde1 solution phi yields a dually flat metric, and
// (ii) any pde1 violation shows up in the dual-flatness residual, scaled by
//      the predicted factor. The c_bar ~ 0 data is flagged inconclusive
//      (the trivial case makes every phi dually flat).
struct Theorem1Report {
    long samples = 0;
    double max_dual_flat = 0;      // max |dual-flat residual| over the grid
    double max_mismatch = 0;       // max |lhs - rhs| of the factorization
    double max_pde1 = 0;           // max |pde1 expression| seen
    double min_abs_cbar = 0;
    bool trivial_case = false;     // c_bar ~ 0 everywhere sampled
};

Theorem1Report theorem1_equivalence(const GeneralABMetric& m, const DuallyFlatData& data,
                                    std::uint64_t seed, long samples, double x_radius,
                                    double cbar_floor = 1e-12);

// ---- deterministic samplers --------------------------------------------------------

// Draw (x, y) with x in the ball of x_radius, y on the unit sphere, rejecting
// points outside phi's domain or with |s| too close to b. Throws after
// max_attempts rejections.
template <class P>
struct XYSampler {
    const RiemannianMetric& alpha;
    const OneForm& beta;
    const P& phi;
    CounterRng rng;
    double x_radius;
    double s_cap = 0.999;
    int max_attempts = 500;

    struct Draw {
        std::vector<double> x, y;
        double b2 = 0, s = 0;
    };

    Draw draw(std::uint64_t index) const;
};

template <class P>
XYSampler<P> make_sampler(const RiemannianMetric& alpha, const OneForm& beta,
                          const P& phi, std::uint64_t seed, double x_radius) {
    return XYSampler<P>{alpha, beta, phi, CounterRng(seed), x_radius};
}

} // namespace dflat
