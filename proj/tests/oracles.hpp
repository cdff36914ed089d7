#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerical kernels; everything is written out with plain loops or
// closed forms.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "freeholo/freepoly.hpp"
#include "freeholo/matcore.hpp"

namespace oracle {

using freeholo::CMatrix;
using freeholo::Complex;

inline CMatrix naive_matmul(const CMatrix& a, const CMatrix& b) {
    CMatrix c = CMatrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            Complex s = 0.0;
            for (Eigen::Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    }
    return c;
}

inline CMatrix inverse2(const CMatrix& a) {
    const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    CMatrix inv(2, 2);
    inv << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0);
    return inv / det;
}

/// Eigenvalues of a 2x2 Hermitian matrix from the quadratic formula, ascending.
inline std::pair<double, double> hermitian_eigs2(const CMatrix& h) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const double b2 = std::norm(h(0, 1));
    const double mean = 0.5 * (a + d);
    const double rad = std::sqrt(0.25 * (a - d) * (a - d) + b2);
    return {mean - rad, mean + rad};
}

/// ||A|| for 2x2 A as the square root of the largest eigenvalue of A*A.
inline double opnorm2(const CMatrix& a) {
    return std::sqrt(hermitian_eigs2(CMatrix(a.adjoint() * a)).second);
}

/// Frobenius norm by explicit summation.
inline double frob(const CMatrix& a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
    }
    return std::sqrt(s);
}

/// sum_{k<m} c r^k.
inline Complex geometric_partial(Complex c, Complex r, int m) {
    Complex s = 0.0;
    Complex p = 1.0;
    for (int k = 0; k < m; ++k) {
        s += c * p;
        p *= r;
    }
    return s;
}

/// Evaluates a free polynomial by multiplying out every word with naive_matmul.
inline CMatrix naive_eval(const freeholo::FreePoly& p, const std::vector<CMatrix>& x) {
    const auto n = x.front().rows();
    CMatrix out = CMatrix::Zero(n, n);
    for (const auto& [w, c] : p.terms()) {
        CMatrix prod = CMatrix::Identity(n, n);
        for (int letter : w) prod = naive_matmul(prod, x[static_cast<std::size_t>(letter - 1)]);
        out += c * prod;
    }
    return out;
}

/// All words of length exactly k over d letters, in lexicographic order.
inline std::vector<freeholo::Word> words(int d, int k) {
    std::vector<freeholo::Word> out{{}};
    for (int step = 0; step < k; ++step) {
        std::vector<freeholo::Word> next;
        for (const auto& w : out) {
            for (int l = 1; l <= d; ++l) {
                auto v = w;
                v.push_back(l);
                next.push_back(std::move(v));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Richardson-extrapolated central difference of t -> g(t) at 0.
inline CMatrix richardson(const std::function<CMatrix(double)>& g, double h) {
    const CMatrix d1 = (g(h) - g(-h)) / (2.0 * h);
    const CMatrix d2 = (g(h / 2) - g(-h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace oracle
