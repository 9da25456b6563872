#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dflat/jet.hpp"
#include "dflat/linalg.hpp"
#include "dflat/rng.hpp"

namespace dflat {

// Coordinate fields are closures evaluable at plain points and at jet points;
// every derivative in the toolkit comes from the jet path, never from
// hand-coded formulas for the same quantity.

struct RiemannianMetric {
    int n = 0;
    std::string name;
    std::function<Mat<double>(const std::vector<double>&)> eval_d;
    std::function<Mat<Jet2>(const std::vector<Jet2>&)> eval_j;
};

struct OneForm {
    int n = 0;
    std::string name;
    std::function<std::vector<double>(const std::vector<double>&)> eval_d;
    std::function<std::vector<Jet2>(const std::vector<Jet2>&)> eval_j;
};

struct ScalarField {
    std::string name;
    std::function<double(const std::vector<double>&)> eval_d;
};

template <class F>
RiemannianMetric make_metric(int n, std::string name, F f) {
    RiemannianMetric m;
    m.n = n;
    m.name = std::move(name);
    m.eval_d = [f](const std::vector<double>& x) { return f(x); };
    m.eval_j = [f](const std::vector<Jet2>& x) { return f(x); };
    return m;
}

template <class F>
OneForm make_oneform(int n, std::string name, F f) {
    OneForm b;
    b.n = n;
    b.name = std::move(name);
    b.eval_d = [f](const std::vector<double>& x) { return f(x); };
    b.eval_j = [f](const std::vector<Jet2>& x) { return f(x); };
    return b;
}

template <class S>
Mat<S> eval_metric(const RiemannianMetric& m, const std::vector<S>& x) {
    if constexpr (std::is_same_v<S, double>)
        return m.eval_d(x);
    else
        return m.eval_j(x);
}

template <class S>
std::vector<S> eval_oneform(const OneForm& b, const std::vector<S>& x) {
    if constexpr (std::is_same_v<S, double>)
        return b.eval_d(x);
    else
        return b.eval_j(x);
}

// theta and c of conditions (3); theta is dually-related data for the form,
// c the conformal-like scale. c_bar = c + 2 theta_k b^k is the
// non-triviality factor.
struct DuallyFlatData {
    OneForm theta;
    ScalarField c;
};

struct ModelParams {
    double mu = 0.0;
    double lambda = 1.0;
    double sigma = 1.0;
    std::vector<double> a_vec;

    // radius of the model ball: finite only for mu < 0
    double r_mu() const {
        return mu < 0.0 ? 1.0 / std::sqrt(-mu) : std::numeric_limits<double>::infinity();
    }
};

// ---- pointwise tensor machinery ------------------------------------------------

struct Christoffel {
    int n = 0;
    std::vector<double> g; // [i][j][k], symmetric in (j,k)
    double& at(int i, int j, int k) { return g[(static_cast<size_t>(i) * n + j) * n + k]; }
    double at(int i, int j, int k) const { return g[(static_cast<size_t>(i) * n + j) * n + k]; }
};

Christoffel christoffel(const RiemannianMetric& metric, const std::vector<double>& x);

std::vector<double> spray_riemann(const RiemannianMetric& metric,
                                  const std::vector<double>& x,
                                  const std::vector<double>& y);

// b_{i|j} with j the differentiation index.
Mat<double> covariant_derivative(const RiemannianMetric& metric, const OneForm& form,
                                 const std::vector<double>& x);

struct Contractions {
    Mat<double> rij, sij;          // r_ij, s_ij
    std::vector<double> r_lo, r_up; // r_i, r^i
    std::vector<double> s_lo, s_up; // s_i, s^i
    std::vector<double> si0, s_up0; // s_{i0}, s^i_0
    double r00 = 0, r0 = 0, r = 0, s0 = 0;
    std::vector<double> b_lo, b_up; // b_i, b^i
    double b2 = 0;
};

Contractions contractions(const RiemannianMetric& metric, const OneForm& form,
                          const std::vector<double>& x, const std::vector<double>& y);

// max-norm of G^i - 2 theta y^i - alpha^2 theta^i at (x, y)
double check_dually_flat_spray(const RiemannianMetric& metric, const OneForm& theta,
                               const std::vector<double>& x, const std::vector<double>& y);

struct DuallyRelatedCheck {
    double residual = 0; // max-norm of b_{i|j} - 2 theta_i b_j - c a_ij
    double c_bar = 0;    // c + 2 theta_k b^k at x
};

DuallyRelatedCheck check_dually_related(const RiemannianMetric& metric, const OneForm& form,
                                        const DuallyFlatData& data,
                                        const std::vector<double>& x);

// Least-squares extraction of theta(x) from spray samples G^i = 2 theta y^i + alpha^2 theta^i
// at several unit-sphere y's; the paper asserts existence, not a recipe.
std::vector<double> fit_theta_spray(const RiemannianMetric& metric,
                                    const std::vector<double>& x, const CounterRng& rng,
                                    std::uint64_t index_base = 0);

// Pointwise least squares for (theta_i(x), c(x)) from b_{i|j} = 2 theta_i b_j + c a_ij.
struct FittedData {
    std::vector<double> theta;
    double c = 0;
    double residual = 0;
};

FittedData fit_dually_related(const RiemannianMetric& metric, const OneForm& form,
                              const std::vector<double>& x);

// Independent spray route through jets of alpha^2 over the joint (x, y)
// variables; used as the oracle against the Christoffel assembly.
std::vector<double> spray_from_alpha2(const RiemannianMetric& metric,
                                      const std::vector<double>& x,
                                      const std::vector<double>& y);

// ---- model fields --------------------------------------------------------------

RiemannianMetric euclidean_metric(int n);
OneForm constant_oneform(int n, std::vector<double> a);

// constant sectional curvature mu metric, alpha of the (csc) display
RiemannianMetric csc_metric(int n, double mu);
// closed conformal 1-form on csc, the (cc) display
OneForm cc_oneform(int n, double mu, double lambda, std::vector<double> a);
// flat-case data: alpha = |y|, beta = lambda<x,y> + <a,y>
OneForm cccc_oneform(int n, double lambda, std::vector<double> a);

// dually flat metric / dually related form of the a = 0 family
RiemannianMetric dfR_metric(int n, double mu);
OneForm drb_oneform(int n, double mu, double lambda);

// randomized polynomial data for transcription guards
RiemannianMetric random_poly_metric(int n, std::uint64_t seed, double eps = 0.05);
OneForm random_affine_oneform(int n, std::uint64_t seed, double scale = 0.3);

} // namespace dflat
