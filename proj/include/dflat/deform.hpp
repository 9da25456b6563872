#pragma once

#include <functional>
#include <string>

#include "dflat/fields.hpp"

namespace dflat {

// Univariate smooth function of t = b^2, evaluable at doubles and jets.
struct SmoothFn {
    std::string name;
    std::function<double(double)> d;
    std::function<Jet2(const Jet2&)> j;
};

template <class F>
SmoothFn make_smooth(std::string name, F f) {
    SmoothFn s;
    s.name = std::move(name);
    s.d = [f](double t) { return f(t); };
    s.j = [f](const Jet2& t) { return f(t); };
    return s;
}

template <class S>
S eval_smooth(const SmoothFn& f, const S& t) {
    if constexpr (std::is_same_v<S, double>)
        return f.d(t);
    else
        return f.j(t);
}

// derivative at a point through a one-variable jet
double smooth_d1(const SmoothFn& f, double t);

struct DeformationFactors {
    SmoothFn kappa, rho, nu;
};

// the closed-form section-4 factors: kappa = mu/(1+mu t), rho = -ln(1+mu t)/4,
// nu = sigma (1+mu t)^(-5/4)
DeformationFactors section4_factors(double mu, double sigma);

// ---- deformation stages --------------------------------------------------------

// stage 1: alpha~ = sqrt(alpha^2 - kappa(b^2) beta^2), beta unchanged
RiemannianMetric deform_stage1(const RiemannianMetric& alpha, const OneForm& beta,
                               const SmoothFn& kappa);
// stage 2 on top of stage 1: e^{rho(b^2)} alpha~
RiemannianMetric deform_stage2(const RiemannianMetric& alpha, const OneForm& beta,
                               const SmoothFn& kappa, const SmoothFn& rho);
// stage 3: beta_bar = nu(b^2) beta (metric unchanged)
OneForm deform_stage3(const OneForm& beta, const RiemannianMetric& alpha,
                      const SmoothFn& nu);

struct DeformedPair {
    RiemannianMetric metric;
    OneForm form;
    bool trivial_scaling = false; // kappa == 0 branch: stages are a plain scaling
};

DeformedPair deform_pipeline(const RiemannianMetric& alpha, const OneForm& beta,
                             const DeformationFactors& factors);

// ---- lemma verification ----------------------------------------------------------

// residual_spray: direct spray of the deformed metric vs the lemma's right
// side assembled from base quantities; residual_cov: same for b_{i|j}
struct LemmaResiduals {
    double spray = 0;
    double cov = 0;
    double max() const { return spray > cov ? spray : cov; }
};

LemmaResiduals verify_lemma1(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const std::vector<double>& x,
                             const std::vector<double>& y);

LemmaResiduals verify_lemma2(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const SmoothFn& rho,
                             const std::vector<double>& x, const std::vector<double>& y);

LemmaResiduals verify_lemma3(const RiemannianMetric& alpha, const OneForm& beta,
                             const SmoothFn& kappa, const SmoothFn& rho,
                             const SmoothFn& nu, const std::vector<double>& x,
                             const std::vector<double>& y);

// ---- deformation-factor ODEs -------------------------------------------------------

struct FactorOdeReport {
    double res_kappa = 0;   // kappa' + kappa^2
    double res_rho = 0;     // kappa + 4 rho'
    double res_nu = 0;      // nu' + (5/4) kappa nu
    double res_family = 0;  // kappa = 1/(t+c) and -1/(c-t) against kappa' = -kappa^2
    double max() const;
};

FactorOdeReport factor_odes(double mu, int samples = 40);

// ---- Prop 4.2 -----------------------------------------------------------------------

struct Prop42 {
    RiemannianMetric metric; // alpha-bar
    OneForm form;            // beta-bar
    DuallyFlatData data;     // theta-bar and c(x), closed form
    ModelParams params;
};

// built on the flat data alpha = |y|, beta = lambda<x,y> + <a,y>
Prop42 build_prop42(int n, double mu, double sigma, double lambda,
                    std::vector<double> a_vec);

} // namespace dflat
