#include "npk/compatibility.hpp"

#include <cmath>
#include <stdexcept>

namespace npk {

Mat3 MetricProfile::dG(Real t) const {
    if (derivative) return derivative(t);
    const Real e = step();
    return (value(t + e) - value(t - e)) / (2 * e);
}

Mat3 MetricProfile::ddG(Real t) const {
    if (second_derivative) return second_derivative(t);
    if (derivative) {
        const Real e = step();
        return (derivative(t + e) - derivative(t - e)) / (2 * e);
    }
    const Real e = step();
    return (value(t + e) - 2 * value(t) + value(t - e)) / (e * e);
}

MetricProfile MetricProfile::flat(Real h) {
    return {[](Real) { return Mat3::Identity(); },
            [](Real) { return Mat3::Zero(); },
            [](Real) { return Mat3::Zero(); },
            h / 2};
}

namespace {

MetricProfile nematic_metric(Texture texture, Real a, Real h) {
    DirectorProfile director(texture);
    const Real rate = pi / (2 * h);  // d f_h / dt
    auto dn = [director, rate, h, texture](Real t) -> Vec3 {
        const Real f = pi / 4 + rate * t;
        if (texture == Texture::SplayBend) return {-rate * std::sin(f), 0, rate * std::cos(f)};
        return {-rate * std::sin(f), rate * std::cos(f), 0};
    };
    auto n_of = [director, h](Real t) { return director(t / h); };
    return {[n_of, a](Real t) {
                const Vec3 n = n_of(t);
                return (Mat3::Identity() + (a - 1) * (n * n.transpose())).eval();
            },
            [n_of, dn, a](Real t) {
                const Vec3 n = n_of(t), d = dn(t);
                return ((a - 1) * (d * n.transpose() + n * d.transpose())).eval();
            },
            [n_of, dn, a, rate](Real t) {
                const Vec3 n = n_of(t), d = dn(t);
                const Vec3 dd = -rate * rate * n;
                return ((a - 1) *
                        (dd * n.transpose() + 2 * (d * d.transpose()) + n * dd.transpose()))
                    .eval();
            },
            h / 2};
}

}  // namespace

MetricProfile MetricProfile::splay_bend(Real a, Real h) {
    return nematic_metric(Texture::SplayBend, a, h);
}

MetricProfile MetricProfile::twisted(Real a, Real h) {
    return nematic_metric(Texture::Twisted, a, h);
}

MetricProfile MetricProfile::from_strain_profile(const StrainProfile& profile) {
    const Real h = profile.thickness();
    switch (profile.texture()) {
        case Texture::SplayBend:
        case Texture::Twisted: {
            // Constant conformal factors leave Ricci unchanged; use the
            // normalised form matching the closed-form coefficients.
            const Real a = 1 + profile.params().alpha0 * h / profile.params().h0;
            return nematic_metric(profile.texture(), a, h);
        }
        case Texture::ConstantNormal: {
            const Real rate = profile.params().alpha0 / profile.params().h0;
            auto a_of = [rate](Real t) { return 1 + rate * t; };
            auto diag = [](Real planar, Real normal) {
                return Mat3(Vec3(planar, planar, normal).asDiagonal());
            };
            return {[a_of, diag](Real t) {
                        const Real a = a_of(t);
                        return diag(std::pow(a, -1.0 / 3.0), std::pow(a, 2.0 / 3.0));
                    },
                    [a_of, diag, rate](Real t) {
                        const Real a = a_of(t);
                        return diag(-rate / 3 * std::pow(a, -4.0 / 3.0),
                                    2 * rate / 3 * std::pow(a, -1.0 / 3.0));
                    },
                    [a_of, diag, rate](Real t) {
                        const Real a = a_of(t);
                        return diag(4 * rate * rate / 9 * std::pow(a, -7.0 / 3.0),
                                    -2 * rate * rate / 9 * std::pow(a, -4.0 / 3.0));
                    },
                    h / 2};
        }
        case Texture::Quadratic: {
            const Real d0 = profile.params().delta0();
            const Mat3 P = profile.quadratic_linear_coefficient();
            return {[profile](Real t) { return profile.c_bar(t); },
                    [d0, P, profile, h](Real t) {
                        const Real e = 1e-5 * h;
                        return ((profile.c_bar(t + e) - profile.c_bar(t - e)) / (2 * e)).eval();
                    },
                    nullptr,
                    h / 2,
                    1e-5 * h};
        }
    }
    throw std::logic_error("from_strain_profile: unreachable");
}

Christoffels christoffel(const MetricProfile& metric, Real t) {
    const Mat3 G = metric.G(t);
    Eigen::LLT<Mat3> llt(G);
    if (llt.info() != Eigen::Success)
        throw NumericalError("christoffel: metric is not SPD at the requested sample");
    const Mat3 Ginv = G.inverse();
    const Mat3 dG = metric.dG(t);

    Christoffels c;
    constexpr int T = 2;  // thickness index
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                c.first(i, j, l) = 0.5 * ((i == T ? dG(j, l) : 0) + (j == T ? dG(i, l) : 0) -
                                          (l == T ? dG(i, j) : 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Real s = 0;
                for (int l = 0; l < 3; ++l) s += Ginv(k, l) * c.first(i, j, l);
                c.second(i, j, k) = s;
            }
    return c;
}

namespace {

/// Christoffels of the second kind and their thickness derivative, both
/// assembled from analytic (or declared-step FD) metric derivatives.
struct ChristoffelData {
    Christoffels gamma;
    std::array<Real, 27> d_second{};  // d/dt Gamma_{ij}^k

    Real dsec(int i, int j, int k) const { return d_second[9 * i + 3 * j + k]; }
};

ChristoffelData christoffel_with_derivative(const MetricProfile& metric, Real t) {
    ChristoffelData data;
    data.gamma = christoffel(metric, t);

    const Mat3 G = metric.G(t);
    const Mat3 Ginv = G.inverse();
    const Mat3 dG = metric.dG(t);
    const Mat3 ddG = metric.ddG(t);
    const Mat3 dGinv = -Ginv * dG * Ginv;

    constexpr int T = 2;
    std::array<Real, 27> d_first{};
    auto idx = [](int i, int j, int l) { return 9 * i + 3 * j + l; };
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l)
                d_first[idx(i, j, l)] = 0.5 * ((i == T ? ddG(j, l) : 0) +
                                               (j == T ? ddG(i, l) : 0) -
                                               (l == T ? ddG(i, j) : 0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                Real s = 0;
                for (int l = 0; l < 3; ++l)
                    s += dGinv(k, l) * data.gamma.first(i, j, l) + Ginv(k, l) * d_first[idx(i, j, l)];
                data.d_second[idx(i, j, k)] = s;
            }
    return data;
}

}  // namespace

Mat3 ricci_tensor(const MetricProfile& metric, Real t) {
    const ChristoffelData data = christoffel_with_derivative(metric, t);
    const Christoffels& g = data.gamma;
    constexpr int T = 2;

    Mat3 R;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            Real r = data.dsec(i, j, T);  // d_l Gamma_ij^l, only l = t survives
            if (j == T)
                for (int l = 0; l < 3; ++l) r -= data.dsec(i, l, l);
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l)
                    r += g.second(l, k, l) * g.second(i, j, k) -
                         g.second(j, k, l) * g.second(i, l, k);
            R(i, j) = r;
        }
    return R;
}

RicciReport ricci(const MetricProfile& metric, int grid_points, Real tol_factor) {
    RicciReport report;
    report.grid.reserve(grid_points);
    report.ricci.reserve(grid_points);
    report.christoffels.reserve(grid_points);

    const Real H = metric.half_width;
    Real min_eig = std::numeric_limits<Real>::max();
    Real max_dg_sq = 0, max_ddg = 0;
    for (int i = 0; i < grid_points; ++i) {
        const Real t = -H + (i + 0.5) * 2 * H / grid_points;
        report.grid.push_back(t);
        report.christoffels.push_back(christoffel(metric, t));
        const Mat3 R = ricci_tensor(metric, t);
        report.ricci.push_back(R);
        report.max_abs_ricci = std::max(report.max_abs_ricci, R.cwiseAbs().maxCoeff());

        Eigen::SelfAdjointEigenSolver<Mat3> es(metric.G(t));
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
        max_dg_sq = std::max(max_dg_sq, metric.dG(t).squaredNorm());
        max_ddg = std::max(max_ddg, metric.ddG(t).cwiseAbs().maxCoeff());
    }
    report.scale = max_dg_sq / min_eig;
    // Floor covers metrics with vanishing first derivative, where Ricci is
    // driven by the second-derivative term.
    report.threshold = tol_factor * (report.scale + max_ddg / min_eig) + 1e-14;
    report.verdict = report.max_abs_ricci <= report.threshold ? Verdict::Compatible
                                                              : Verdict::Incompatible;
    return report;
}

Real max_riemann_abs(const MetricProfile& metric, int grid_points) {
    const Real H = metric.half_width;
    constexpr int T = 2;
    Real worst = 0;
    for (int s = 0; s < grid_points; ++s) {
        const Real t = -H + (s + 0.5) * 2 * H / grid_points;
        const ChristoffelData data = christoffel_with_derivative(metric, t);
        const Christoffels& g = data.gamma;

        // d/dt Gamma_{ijl} (first kind)
        const Mat3 ddG = metric.ddG(t);
        auto d_first = [&](int i, int j, int l) {
            return 0.5 * ((i == T ? ddG(j, l) : 0) + (j == T ? ddG(i, l) : 0) -
                          (l == T ? ddG(i, j) : 0));
        };
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    for (int k = 0; k < 3; ++k) {
                        Real r = (j == T ? d_first(i, k, l) : 0) - (k == T ? d_first(i, j, l) : 0);
                        for (int p = 0; p < 3; ++p)
                            r += g.second(i, j, p) * g.first(k, l, p) -
                                 g.second(i, k, p) * g.first(j, l, p);
                        worst = std::max(worst, std::abs(r));
                    }
    }
    return worst;
}

void QuadraticStrainSpec::validate() const {
    for (int i = 0; i < 101; ++i) {
        const Real t = h * (-0.5 + Real(i) / 100) * 0.9999;
        const Mat3 g = G(t);
        if (!(g(0, 0) > 0 && g(1, 1) > 0 && g(2, 2) > 0))
            throw NumericalError("QuadraticStrainSpec: G(t) not SPD across the thickness");
    }
}

MetricProfile QuadraticStrainSpec::metric() const {
    validate();
    const Vec3 A_ = A, B_ = Bq;
    return {[A_, B_](Real t) {
                return Mat3(Vec3(1 + t * A_[0] + t * t * B_[0], 1 + t * A_[1] + t * t * B_[1],
                                 1 + t * A_[2] + t * t * B_[2])
                                .asDiagonal());
            },
            [A_, B_](Real t) {
                return Mat3(Vec3(A_[0] + 2 * t * B_[0], A_[1] + 2 * t * B_[1],
                                 A_[2] + 2 * t * B_[2])
                                .asDiagonal());
            },
            [B_](Real) { return Mat3((2 * B_).asDiagonal()); },
            h / 2};
}

const char* to_string(QuadraticClass c) {
    switch (c) {
        case QuadraticClass::CaseI: return "case-i";
        case QuadraticClass::CaseII: return "case-ii";
        case QuadraticClass::CaseIII: return "case-iii";
        case QuadraticClass::CaseIV: return "case-iv";
        case QuadraticClass::Incompatible: return "incompatible";
    }
    return "?";
}

QuadraticClass classify_quadratic(const QuadraticStrainSpec& spec, Real tol) {
    const Vec3& A = spec.A;
    const Vec3& B = spec.Bq;
    auto zero = [tol](Real x) { return std::abs(x) <= tol; };

    if (zero(A[0]) && zero(A[1]) && zero(A[2]) && zero(B[0]) && zero(B[1]) && zero(B[2]))
        return QuadraticClass::CaseI;
    if (zero(A[1]) && zero(A[2]) && zero(B[1]) && zero(B[2]) &&
        zero(B[0] - A[0] * A[0] / 4) && !zero(B[0]))
        return QuadraticClass::CaseII;
    if (zero(A[0]) && zero(A[2]) && zero(B[0]) && zero(B[2]) &&
        zero(B[1] - A[1] * A[1] / 4) && !zero(B[1]))
        return QuadraticClass::CaseIII;
    if (zero(A[0]) && zero(A[1]) && zero(B[0]) && zero(B[1]) &&
        A[2] * A[2] + B[2] * B[2] > tol * tol)
        return QuadraticClass::CaseIV;
    return QuadraticClass::Incompatible;
}

Vec3 TubeDeformation::map(Real s, Real z2, Real t) const {
    const Vec3 gamma(std::sin(k * s) / k, 0, std::cos(k * s) / k);
    const Vec3 N(-std::sin(k * s), 0, -std::cos(k * s));  // signed normal gamma''/k
    return gamma + t * N + z2 * Vec3::UnitY();
}

Mat3 TubeDeformation::gradient(Real s, Real z2, Real t) const {
    (void)z2;
    const Vec3 T(std::cos(k * s), 0, -std::sin(k * s));
    const Vec3 N(-std::sin(k * s), 0, -std::cos(k * s));
    Mat3 grad;
    grad.col(0) = (1 - k * t) * T;
    grad.col(1) = Vec3::UnitY();
    grad.col(2) = N;
    return grad;
}

Mat3 TubeDeformation::target_metric(Real t) const {
    const Real g11 = (1 - k * t) * (1 - k * t);
    return Mat3(Vec3(g11, 1, 1).asDiagonal());
}

TubeDeformation tube_deformation(Real k, const SlabBox& box, int grid) {
    if (k == 0) throw std::invalid_argument("tube_deformation: k = 0 (use the identity map)");
    if (!(std::abs(k) * box.h / 2 < 1))
        throw std::invalid_argument("tube_deformation: |k| h / 2 must be below 1");
    TubeDeformation tube;
    tube.k = k;
    tube.box = box;
    Real worst = 0;
    for (int a = 0; a < grid; ++a)
        for (int b = 0; b < grid; ++b)
            for (int c = 0; c < grid; ++c) {
                const Real s = box.s_min + (box.s_max - box.s_min) * a / (grid - 1);
                const Real z2 = box.z2_min + (box.z2_max - box.z2_min) * b / (grid - 1);
                const Real t = -box.h / 2 + box.h * c / (grid - 1);
                const Mat3 g = tube.gradient(s, z2, t);
                worst = std::max(worst,
                                 ((g.transpose() * g - tube.target_metric(t)).cwiseAbs().maxCoeff()));
            }
    tube.residual = worst;
    return tube;
}

}  // namespace npk
