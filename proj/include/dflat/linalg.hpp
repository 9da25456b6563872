#pragma once

#include <cmath>
#include <vector>

#include "dflat/error.hpp"
#include "dflat/jet.hpp"

namespace dflat {

// Dense square matrix over double or a jet scalar. Sizes here are tiny
// (n <= 4, 2n+1 for fit systems); no blocking, no sparsity.
template <class S>
struct Mat {
    int n = 0;
    std::vector<S> a;

    Mat() = default;
    explicit Mat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_) {}
    Mat(int n_, const S& fill) : n(n_), a(static_cast<size_t>(n_) * n_, fill) {}

    S& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

// Solve A x = b by Gaussian elimination with partial pivoting on the
// leading (value) part; works for jet-valued systems.
template <class S>
std::vector<S> solve(Mat<S> A, std::vector<S> b) {
    const int n = A.n;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(leading_value(A(col, col)));
        for (int r = col + 1; r < n; ++r) {
            double mag = std::abs(leading_value(A(r, col)));
            if (mag > best) {
                best = mag;
                piv = r;
            }
        }
        if (best == 0.0) fail(ErrorKind::singular, "singular matrix in solve");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
            std::swap(b[piv], b[col]);
        }
        for (int r = col + 1; r < n; ++r) {
            S f = A(r, col) / A(col, col);
            for (int j = col; j < n; ++j) A(r, j) = A(r, j) - f * A(col, j);
            b[r] = b[r] - f * b[col];
        }
    }
    std::vector<S> x(b);
    for (int i = n - 1; i >= 0; --i) {
        S acc = b[i];
        for (int j = i + 1; j < n; ++j) acc = acc - A(i, j) * x[j];
        x[i] = acc / A(i, i);
    }
    return x;
}

template <class S>
Mat<S> inverse(const Mat<S>& A) {
    const int n = A.n;
    Mat<S> inv(n, zero_like(A(0, 0)));
    for (int col = 0; col < n; ++col) {
        std::vector<S> e(n, zero_like(A(0, 0)));
        e[col] = one_like(A(0, 0));
        std::vector<S> x = solve(A, e);
        for (int r = 0; r < n; ++r) inv(r, col) = x[r];
    }
    return inv;
}

// Cholesky test for positive definiteness (doubles only).
inline bool cholesky_spd(const Mat<double>& A) {
    const int n = A.n;
    Mat<double> L(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            double sum = A(i, j);
            for (int k = 0; k < j; ++k) sum -= L(i, k) * L(j, k);
            if (i == j) {
                if (sum <= 0.0) return false;
                L(i, i) = std::sqrt(sum);
            } else {
                L(i, j) = sum / L(j, j);
            }
        }
    }
    return true;
}

// Least squares min ||R c - rhs|| via Householder QR; R is rows x cols,
// row-major, rows >= cols.
inline std::vector<double> least_squares(std::vector<double> R, int rows, int cols,
                                         std::vector<double> rhs) {
    if (rows < cols) fail(ErrorKind::input, "least_squares: underdetermined system");
    auto at = [&](int i, int j) -> double& { return R[static_cast<size_t>(i) * cols + j]; };
    for (int k = 0; k < cols; ++k) {
        double norm = 0.0;
        for (int i = k; i < rows; ++i) norm += at(i, k) * at(i, k);
        norm = std::sqrt(norm);
        if (norm == 0.0) fail(ErrorKind::singular, "least_squares: rank deficient");
        if (at(k, k) > 0) norm = -norm;
        // Householder vector stored in column k below the diagonal
        double vk = at(k, k) - norm;
        at(k, k) = norm;
        double vnorm2 = vk * vk;
        std::vector<double> v(rows - k);
        v[0] = vk;
        for (int i = k + 1; i < rows; ++i) {
            v[i - k] = at(i, k);
            vnorm2 += at(i, k) * at(i, k);
        }
        if (vnorm2 == 0.0) continue;
        for (int j = k + 1; j < cols; ++j) {
            double dot = 0.0;
            for (int i = k; i < rows; ++i) dot += v[i - k] * at(i, j);
            double f = 2.0 * dot / vnorm2;
            for (int i = k; i < rows; ++i) at(i, j) -= f * v[i - k];
        }
        double dot = 0.0;
        for (int i = k; i < rows; ++i) dot += v[i - k] * rhs[i];
        double f = 2.0 * dot / vnorm2;
        for (int i = k; i < rows; ++i) rhs[i] -= f * v[i - k];
    }
    std::vector<double> x(cols);
    for (int i = cols - 1; i >= 0; --i) {
        double acc = rhs[i];
        for (int j = i + 1; j < cols; ++j) acc -= at(i, j) * x[j];
        x[i] = acc / at(i, i);
    }
    return x;
}

} // namespace dflat
