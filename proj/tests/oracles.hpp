// Test-only oracles, kept independent of the library's computation paths:
// Kronecker-product Jordan-Wigner matrices, qubit partial traces, and adaptive
// quadrature for the resolvent integral.
#pragma once

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "car/car_operator.hpp"
#include "car/rng.hpp"

namespace oracles {

using car::Complex;
using car::Matrix;

inline Matrix local_e(int row, int col) {
    Matrix m = Matrix::Zero(2, 2);
    m(row - 1, col - 1) = 1.0;
    return m;
}

inline Matrix local_sz() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

/// Direct Kronecker-product construction: sz x ... x sz x e12 x 1 x ... x 1.
inline Matrix jw_annihilator(int mode, int n) {
    Matrix acc = Matrix::Identity(1, 1);
    for (int site = 1; site <= n; ++site) {
        Matrix factor = site < mode ? local_sz() : site == mode ? local_e(1, 2) : Matrix::Identity(2, 2).eval();
        acc = Eigen::kroneckerProduct(acc, factor).eval();
    }
    return acc;
}

/// Partial trace over the trailing (n - keep) tensor factors.
inline Matrix partial_trace_trailing(const Matrix& x, int n, int keep) {
    const Eigen::Index head = Eigen::Index(1) << keep;
    const Eigen::Index tail = Eigen::Index(1) << (n - keep);
    Matrix out = Matrix::Zero(head, head);
    for (Eigen::Index a = 0; a < head; ++a) {
        for (Eigen::Index b = 0; b < head; ++b) {
            Complex acc(0.0, 0.0);
            for (Eigen::Index t = 0; t < tail; ++t) acc += x(a * tail + t, b * tail + t);
            out(a, b) = acc;
        }
    }
    return out;
}

/// (t + A)^{-1} K (t + A)^{-1} integrated over [0, inf): adaptive Simpson on
/// [0, t0] after the substitution t = u/(1-u), plus the analytic tail estimate
/// K/t0 - (AK + KA)/(2 t0^2).
inline Matrix t_map_quadrature(const Matrix& a, const Matrix& k, double tol = 1e-9) {
    const Eigen::Index dim = a.rows();
    auto integrand = [&](double u) -> Matrix {
        const double t = u / (1.0 - u);
        const double jacobian = 1.0 / ((1.0 - u) * (1.0 - u));
        Matrix shifted = a + t * Matrix::Identity(dim, dim);
        Matrix inv = shifted.inverse();
        return jacobian * (inv * k * inv);
    };
    struct Simpson {
        double tol;
        int max_depth;
        Matrix run(const std::function<Matrix(double)>& f, double lo, double hi, const Matrix& flo,
                   const Matrix& fmid, const Matrix& fhi, int depth) const {
            const double mid = 0.5 * (lo + hi);
            const Matrix fl = f(0.5 * (lo + mid));
            const Matrix fr = f(0.5 * (mid + hi));
            const Matrix whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
            const Matrix left = (mid - lo) / 6.0 * (flo + 4.0 * fl + fmid);
            const Matrix right = (hi - mid) / 6.0 * (fmid + 4.0 * fr + fhi);
            const double err = (left + right - whole).cwiseAbs().maxCoeff();
            if (depth >= max_depth || err < 15.0 * tol) {
                return left + right + (left + right - whole) / 15.0;
            }
            return run(f, lo, mid, flo, fl, fmid, depth + 1) + run(f, mid, hi, fmid, fr, fhi, depth + 1);
        }
    };
    const double u_hi = 1.0 - 1e-6;
    const double t0 = u_hi / (1.0 - u_hi);
    Simpson simpson{tol, 30};
    const Matrix flo = integrand(0.0);
    const Matrix fmid = integrand(0.5 * u_hi);
    const Matrix fhi = integrand(u_hi);
    Matrix head = simpson.run(integrand, 0.0, u_hi, flo, fmid, fhi, 0);
    Matrix tail = k / t0 - (a * k + k * a) / (2.0 * t0 * t0);
    return head + tail;
}

inline Matrix random_matrix(Eigen::Index dim, car::Rng& rng) {
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = rng.cgaussian();
    }
    return m;
}

inline Matrix random_hermitian(Eigen::Index dim, car::Rng& rng) {
    Matrix m = random_matrix(dim, rng);
    return 0.5 * (m + m.adjoint()).eval();
}

inline Matrix random_positive(Eigen::Index dim, car::Rng& rng) {
    Matrix m = random_matrix(dim, rng);
    return (m * m.adjoint() / double(dim)).eval();
}

} // namespace oracles
