#pragma once

// Small dense tensor algebra: 2x2 symmetric tensors, 3x3 helpers built on
// Eigen, and the quadratic forms q3 / q2 used by every downstream module.

#include "npk/types.hpp"

#include <cmath>
#include <utility>

namespace npk {

/// Symmetric 2x2 tensor stored by its three independent entries.
///
/// The flattened coordinate vector is (xx, sqrt(2)*xy, yy), so that the
/// Frobenius inner product of two tensors equals the Euclidean dot product
/// of their coordinates. This makes quadratic forms on Sym2 plain 3x3
/// matrices and target extraction a linear solve.
template <typename Scalar>
struct Sym2T {
    Scalar xx{0}, xy{0}, yy{0};

    Sym2T() = default;
    Sym2T(Scalar xx_, Scalar xy_, Scalar yy_) : xx(xx_), xy(xy_), yy(yy_) {}

    static Sym2T Zero() { return {0, 0, 0}; }
    static Sym2T Identity() { return {1, 0, 1}; }
    static Sym2T Diag(Scalar a, Scalar b) { return {a, 0, b}; }

    /// Symmetric part of an arbitrary 2x2 matrix.
    static Sym2T from_matrix(const Eigen::Matrix<Scalar, 2, 2>& m) {
        return {m(0, 0), (m(0, 1) + m(1, 0)) / Scalar(2), m(1, 1)};
    }

    Eigen::Matrix<Scalar, 2, 2> matrix() const {
        Eigen::Matrix<Scalar, 2, 2> m;
        m << xx, xy, xy, yy;
        return m;
    }

    Scalar trace() const { return xx + yy; }
    Scalar det() const { return xx * yy - xy * xy; }
    Scalar squaredNorm() const { return xx * xx + 2 * xy * xy + yy * yy; }
    Scalar norm() const { return std::sqrt(squaredNorm()); }

    /// Eigenvalues in ascending order; exact on diagonal input.
    std::pair<Scalar, Scalar> eigenvalues() const {
        if (xy == Scalar(0)) return xx <= yy ? std::pair{xx, yy} : std::pair{yy, xx};
        const Scalar mean = (xx + yy) / Scalar(2);
        const Scalar r = std::hypot((xx - yy) / Scalar(2), xy);
        return {mean - r, mean + r};
    }

    /// Coordinates in the orthonormal basis (xx, sqrt(2)*xy, yy).
    Eigen::Matrix<Scalar, 3, 1> flatten() const {
        constexpr Scalar sqrt2 = Scalar(1.4142135623730950488);
        return {xx, sqrt2 * xy, yy};
    }
    static Sym2T unflatten(const Eigen::Matrix<Scalar, 3, 1>& v) {
        constexpr Scalar sqrt2 = Scalar(1.4142135623730950488);
        return {v[0], v[1] / sqrt2, v[2]};
    }

    Sym2T operator+(const Sym2T& o) const { return {xx + o.xx, xy + o.xy, yy + o.yy}; }
    Sym2T operator-(const Sym2T& o) const { return {xx - o.xx, xy - o.xy, yy - o.yy}; }
    Sym2T operator-() const { return {-xx, -xy, -yy}; }
    Sym2T& operator+=(const Sym2T& o) {
        xx += o.xx;
        xy += o.xy;
        yy += o.yy;
        return *this;
    }
    friend Sym2T operator*(Scalar s, const Sym2T& a) { return {s * a.xx, s * a.xy, s * a.yy}; }
    friend Sym2T operator*(const Sym2T& a, Scalar s) { return {s * a.xx, s * a.xy, s * a.yy}; }
};

using Sym2 = Sym2T<Real>;

/// Quadratic polynomial on Sym2 in the flattened basis:
/// p(G) = g^T quadratic g + linear . g + constant, g = G.flatten().
template <typename Scalar>
struct QuadForm2T {
    Eigen::Matrix<Scalar, 3, 3> quadratic = Eigen::Matrix<Scalar, 3, 3>::Zero();
    Eigen::Matrix<Scalar, 3, 1> linear = Eigen::Matrix<Scalar, 3, 1>::Zero();
    Scalar constant{0};

    Scalar operator()(const Sym2T<Scalar>& G) const {
        const auto g = G.flatten();
        return g.dot(quadratic * g) + linear.dot(g) + constant;
    }
};

using QuadForm2 = QuadForm2T<Real>;

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> sym(const Eigen::Matrix<Scalar, 3, 3>& m) {
    return (m + m.transpose()) / Scalar(2);
}

/// Square root of a symmetric positive definite matrix via spectral
/// decomposition. Throws NumericalError if an eigenvalue is not positive.
inline Mat3 spd_sqrt(const Mat3& x) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(x);
    if (es.info() != Eigen::Success) throw NumericalError("spd_sqrt: eigensolver failed");
    Vec3 ev = es.eigenvalues();
    if (ev.minCoeff() <= 0) throw NumericalError("spd_sqrt: matrix is not positive definite");
    return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

inline Mat3 spd_sqrt_inv(const Mat3& x) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(x);
    if (es.info() != Eigen::Success) throw NumericalError("spd_sqrt_inv: eigensolver failed");
    Vec3 ev = es.eigenvalues();
    if (ev.minCoeff() <= 0) throw NumericalError("spd_sqrt_inv: matrix is not positive definite");
    return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

/// q3(M) = 2 mu |sym M|^2 + kappa tr^2 M. Nonnegative; zero iff M is
/// antisymmetric.
template <typename Scalar>
Scalar q3(const Eigen::Matrix<Scalar, 3, 3>& M, Scalar mu, Scalar kappa) {
    const Eigen::Matrix<Scalar, 3, 3> s = sym(M);
    const Scalar tr = M.trace();
    return 2 * mu * s.squaredNorm() + kappa * tr * tr;
}

/// Trace coupling ratio kappa / (2 mu + kappa); always in (0,1).
template <typename Scalar>
Scalar gamma_ratio(Scalar mu, Scalar kappa) {
    return kappa / (2 * mu + kappa);
}

/// q2(G) = 2 mu (|G|^2 + gamma tr^2 G) on symmetric G.
template <typename Scalar>
Scalar q2(const Sym2T<Scalar>& G, Scalar mu, Scalar gamma) {
    const Scalar tr = G.trace();
    return 2 * mu * (G.squaredNorm() + gamma * tr * tr);
}

/// Polarisation of q2: the symmetric bilinear form with q2(G) = q2_inner(G,G).
template <typename Scalar>
Scalar q2_inner(const Sym2T<Scalar>& a, const Sym2T<Scalar>& b, Scalar mu, Scalar gamma) {
    const Scalar frob = a.xx * b.xx + 2 * a.xy * b.xy + a.yy * b.yy;
    return 2 * mu * (frob + gamma * a.trace() * b.trace());
}

/// Coefficient matrix of q2 in the flattened basis: 2 mu (I + gamma s s^T),
/// s = (1,0,1).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> q2_coefficient_matrix(Scalar mu, Scalar gamma) {
    Eigen::Matrix<Scalar, 3, 1> s;
    s << 1, 0, 1;
    return 2 * mu *
           (Eigen::Matrix<Scalar, 3, 3>::Identity() + gamma * (s * s.transpose())).eval();
}

namespace detail {

/// Pads G with last column (b1,b2)^T, zero off-diagonal last row, and corner a.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> pad_with(const Sym2T<Scalar>& G, Scalar b1, Scalar b2, Scalar a) {
    Eigen::Matrix<Scalar, 3, 3> m;
    m << G.xx, G.xy, b1, G.xy, G.yy, b2, 0, 0, a;
    return m;
}

}  // namespace detail

/// Relaxation of q3 over the padded last row/column: minimises
/// q3([G b; 0 a]) over (a, b1, b2) by assembling and solving the 3x3 normal
/// equations of the strictly convex quadratic. Agrees with
/// q2(G, mu, kappa/(2mu+kappa)) to round-off.
inline Real q2_via_relaxation(const Sym2& G, Real mu, Real kappa) {
    auto value = [&](Real a, Real b1, Real b2) {
        return q3(detail::pad_with(G, b1, b2, a), mu, kappa);
    };
    // Recover the quadratic p(u) = 1/2 u^T H u + g.u + c in u = (a,b1,b2)
    // from point evaluations (exact: p is a quadratic polynomial).
    const Real c = value(0, 0, 0);
    Mat3 H;
    Vec3 g;
    const Real step = 1;
    for (int i = 0; i < 3; ++i) {
        Vec3 u = Vec3::Zero();
        u[i] = step;
        const Real plus = value(u[0], u[1], u[2]);
        const Real minus = value(-u[0], -u[1], -u[2]);
        g[i] = (plus - minus) / (2 * step);
        H(i, i) = (plus + minus - 2 * c) / (step * step);
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            Vec3 u = Vec3::Zero();
            u[i] = step;
            u[j] = step;
            const Real both = value(u[0], u[1], u[2]);
            H(i, j) = H(j, i) =
                both - c - g[i] - g[j] - Real(0.5) * (H(i, i) + H(j, j));
        }
    Eigen::LDLT<Mat3> ldlt(H);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericalError("q2_via_relaxation: inner minimiser did not converge (Hessian not SPD)");
    const Vec3 ustar = ldlt.solve(-g);
    return c + g.dot(ustar) + Real(0.5) * ustar.dot(H * ustar);
}

}  // namespace npk
