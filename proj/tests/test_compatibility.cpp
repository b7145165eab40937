#include "npk/compatibility.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace npk;
using namespace npk::testing;

namespace {

// Closed-form coefficients of the splay-bend metric G = I + (a-1) n(t)(x)n(t).
Real sb_gamma_111(Real a, Real h, Real t) {
    const Real f = pi / 4 + pi / (2 * h) * t;
    const Real s = std::sin(f), c = std::cos(f);
    return -(a - 1) * (a - 1) / a * (pi / (2 * h)) * s * s * c * c;
}

// Derived via the Gauss curvature of the (z1, t) block (the metric is a
// flat product in z2): Ric restricted there equals K g, with
// K = (a-1) cos(2 f_h) (pi/2h)^2 / a and g_1t = (a-1) sin(2 f_h)/2.
Real sb_r1t(Real a, Real h, Real t) {
    return (a - 1) * (a - 1) / a * (pi * pi / (16 * h * h)) * std::sin(pi + 2 * pi * t / h);
}

Real tw_rtt(Real a, Real h) {
    return -(a - 1) * (a - 1) / (2 * a) * std::pow(pi / (2 * h), 2);
}

}  // namespace

TEST_CASE("flat metric: zero Christoffels, compatible") {
    const MetricProfile flat = MetricProfile::flat(0.2);
    const Christoffels c = christoffel(flat, 0.05);
    for (Real v : c.second_kind) CHECK(v == 0);
    const RicciReport report = ricci(flat);
    CHECK(report.max_abs_ricci < 1e-12);
    CHECK(report.verdict == Verdict::Compatible);
}

TEST_CASE("splay-bend Christoffel closed forms") {
    const Real a = 1.1, h = 0.1;
    const MetricProfile metric = MetricProfile::splay_bend(a, h);
    // Gamma_11^1 at t = 0 evaluates to about -0.0357.
    const Christoffels c0 = christoffel(metric, 0.0);
    CHECK(c0.second(0, 0, 0) == doctest::Approx(sb_gamma_111(a, h, 0)).epsilon(1e-12));
    CHECK(c0.second(0, 0, 0) == doctest::Approx(-0.035700).epsilon(1e-4));
    for (int i = 0; i < 11; ++i) {
        const Real t = h * (-0.5 + (i + 0.5) / 11);
        const Christoffels c = christoffel(metric, t);
        CHECK(c.second(0, 0, 0) == doctest::Approx(sb_gamma_111(a, h, t)).epsilon(1e-10));
        // Gamma_11^1 = -Gamma_1t^t along the profile.
        CHECK(c.second(0, 2, 2) == doctest::Approx(-sb_gamma_111(a, h, t)).epsilon(1e-10));
        // Lower-index symmetry, exactly as computed.
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
                for (int k = 0; k < 3; ++k) CHECK(c.second(p, q, k) == c.second(q, p, k));
        // Any index equal to the invariant in-plane direction kills the symbol.
        for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
                for (int k = 0; k < 3; ++k)
                    if (p == 1 || q == 1 || k == 1) CHECK(std::abs(c.second(p, q, k)) < 1e-12);
    }
}

TEST_CASE("splay-bend Ricci matches the closed form and is incompatible") {
    const Real a = 1.1, h = 0.1;
    const MetricProfile metric = MetricProfile::splay_bend(a, h);
    Real sup = 0;
    for (int i = 0; i < 11; ++i) sup = std::max(sup, std::abs(sb_r1t(a, h, h * (-0.5 + (i + 0.5) / 11))));
    for (int i = 0; i < 11; ++i) {
        const Real t = h * (-0.5 + (i + 0.5) / 11);
        const Mat3 r = ricci_tensor(metric, t);
        CHECK(std::abs(r(0, 2) - sb_r1t(a, h, t)) < 1e-6 * sup);
        CHECK(std::abs(r(2, 0) - sb_r1t(a, h, t)) < 1e-6 * sup);
    }
    // Spot value at t = h/4: -(0.01/1.1)(pi^2/0.16), about -0.5608.
    CHECK(sb_r1t(a, h, h / 4) == doctest::Approx(-0.560771).epsilon(1e-4));
    const RicciReport report = ricci(metric);
    CHECK(report.verdict == Verdict::Incompatible);
    // Ricci symmetry on every sample.
    for (const Mat3& r : report.ricci) CHECK((r - r.transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("twisted Ricci matches the closed form and is incompatible") {
    const Real a = 1.1, h = 0.1;
    const MetricProfile metric = MetricProfile::twisted(a, h);
    const Real expected = tw_rtt(a, h);
    CHECK(expected == doctest::Approx(-1.12155).epsilon(1e-4));
    for (int i = 0; i < 11; ++i) {
        const Real t = h * (-0.5 + (i + 0.5) / 11);
        const Christoffels c = christoffel(metric, t);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(c.second(2, 2, k)) < 1e-12);
        const Mat3 r = ricci_tensor(metric, t);
        CHECK(r(2, 2) == doctest::Approx(expected).epsilon(1e-6));
    }
    CHECK(ricci(metric).verdict == Verdict::Incompatible);
}

TEST_CASE("finite-difference fallback agrees with analytic derivatives") {
    const MetricProfile analytic = MetricProfile::splay_bend(1.1, 0.1);
    MetricProfile fd = analytic;
    fd.derivative = nullptr;
    fd.second_derivative = nullptr;
    for (int i = 0; i < 11; ++i) {
        const Real t = 0.1 * (-0.5 + (i + 0.5) / 11);
        CHECK((fd.dG(t) - analytic.dG(t)).norm() / analytic.dG(t).norm() < 1e-6);
        const Mat3 r_fd = ricci_tensor(fd, t);
        const Mat3 r = ricci_tensor(analytic, t);
        CHECK((r_fd - r).cwiseAbs().maxCoeff() < 1e-4 * (1 + r.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("quadratic classification") {
    QuadraticStrainSpec spec;
    spec.h = 0.4;
    CHECK(classify_quadratic(spec) == QuadraticClass::CaseI);

    const Real k = 0.7;
    spec.A = Vec3(-2 * k, 0, 0);
    spec.Bq = Vec3(k * k, 0, 0);
    CHECK(classify_quadratic(spec) == QuadraticClass::CaseII);

    spec.A = Vec3(0, -2 * k, 0);
    spec.Bq = Vec3(0, k * k, 0);
    CHECK(classify_quadratic(spec) == QuadraticClass::CaseIII);

    spec.A = Vec3(0, 0, 0.6);
    spec.Bq = Vec3(0, 0, 0.2);
    CHECK(classify_quadratic(spec) == QuadraticClass::CaseIV);

    // Pure linear in-plane strain is never compatible.
    spec.A = Vec3(1, 0, 0);
    spec.Bq = Vec3::Zero();
    CHECK(classify_quadratic(spec) == QuadraticClass::Incompatible);
}

TEST_CASE("classifier agrees with the numerical Ricci verdict") {
    auto verdict_of = [](const QuadraticStrainSpec& spec) { return ricci(spec.metric()).verdict; };
    // Compatible representatives from each case.
    for (int i = 0; i < 10; ++i) {
        const Real k = uniform(0.2, 1.0) * (uniform(0, 1) < 0.5 ? -1 : 1);
        QuadraticStrainSpec spec;
        spec.h = 0.4;
        spec.A = Vec3(-2 * k, 0, 0);
        spec.Bq = Vec3(k * k, 0, 0);
        CHECK(classify_quadratic(spec) != QuadraticClass::Incompatible);
        CHECK(verdict_of(spec) == Verdict::Compatible);

        QuadraticStrainSpec thick;
        thick.h = 0.4;
        thick.A = Vec3(0, 0, uniform(-0.8, 0.8));
        thick.Bq = Vec3(0, 0, uniform(0.05, 0.5));
        CHECK(classify_quadratic(thick) == QuadraticClass::CaseIV);
        CHECK(verdict_of(thick) == Verdict::Compatible);

        QuadraticStrainSpec broken;
        broken.h = 0.4;
        broken.A = Vec3(-2 * k, 0, 0);
        broken.Bq = Vec3(k * k * 1.01, 0, 0);  // near miss of condition (ii)
        CHECK(classify_quadratic(broken) == QuadraticClass::Incompatible);
        CHECK(verdict_of(broken) == Verdict::Incompatible);
    }
}

TEST_CASE("ricci equals the contracted riemann tensor") {
    // Independent assembly: (4,0) coefficients from finite differences of
    // the first-kind symbols, contracted with the inverse metric. Checked on
    // the non-diagonal splay-bend metric where index gymnastics matter.
    const MetricProfile sb = MetricProfile::splay_bend(1.1, 0.1);
    auto riemann = [&](Real t, int l, int i, int j, int k) {
        const Real d = 1e-7;
        auto first = [&](Real tt, int a, int b, int c) {
            return christoffel(sb, tt).first(a, b, c);
        };
        const Christoffels g = christoffel(sb, t);
        Real r = 0;
        if (j == 2) r += (first(t + d, i, k, l) - first(t - d, i, k, l)) / (2 * d);
        if (k == 2) r -= (first(t + d, i, j, l) - first(t - d, i, j, l)) / (2 * d);
        for (int p = 0; p < 3; ++p)
            r += g.second(i, j, p) * g.first(k, l, p) - g.second(i, k, p) * g.first(j, l, p);
        return r;
    };
    for (const Real t : {-0.027, 0.0, 0.013, 0.036}) {
        const Mat3 inverse_metric = sb.G(t).inverse();
        const Mat3 direct = ricci_tensor(sb, t);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                Real contracted = 0;
                for (int l = 0; l < 3; ++l)
                    for (int k = 0; k < 3; ++k)
                        contracted += inverse_metric(l, k) * riemann(t, l, i, k, j);
                CHECK(contracted ==
                      doctest::Approx(direct(i, j)).epsilon(1e-6).scale(1 + std::abs(direct(i, j))));
            }
    }
}

TEST_CASE("riemann cross-check vanishes exactly when ricci does") {
    QuadraticStrainSpec compatible;
    compatible.h = 0.4;
    compatible.A = Vec3(-1.4, 0, 0);
    compatible.Bq = Vec3(0.49, 0, 0);
    CHECK(max_riemann_abs(compatible.metric()) < 1e-10);
    CHECK(max_riemann_abs(MetricProfile::splay_bend(1.1, 0.1)) > 1e-3);
}

TEST_CASE("tube deformation realises the compatible quadratic strain") {
    SlabBox box;
    box.h = 0.2;
    const TubeDeformation tube = tube_deformation(0.5, box);
    CHECK(tube.residual < 1e-10);
    // Metric check matches diag((1-0.5 t)^2, 1, 1) = diag(1 - t + 0.25 t^2, 1, 1).
    CHECK(tube.target_metric(0.08)(0, 0) ==
          doctest::Approx(1 - 0.08 + 0.25 * 0.08 * 0.08).epsilon(1e-14));
    // Off-diagonal metric entries vanish identically; t = 0 slice is I.
    for (int i = 0; i < 5; ++i) {
        const Mat3 g = tube.gradient(uniform(-1, 1), uniform(-1, 1), uniform(-0.1, 0.1));
        const Mat3 m = g.transpose() * g;
        CHECK(std::abs(m(0, 1)) < 1e-14);
        CHECK(std::abs(m(0, 2)) < 1e-14);
        CHECK(std::abs(m(1, 2)) < 1e-14);
        const Mat3 g0 = tube.gradient(uniform(-1, 1), uniform(-1, 1), 0.0);
        CHECK((g0.transpose() * g0 - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    }
    // The realised metric is the case-(ii) quadratic spec, and its Ricci
    // vanishes within the scale-aware threshold.
    QuadraticStrainSpec spec;
    spec.h = box.h;
    spec.A = Vec3(-2 * tube.k, 0, 0);
    spec.Bq = Vec3(tube.k * tube.k, 0, 0);
    CHECK(classify_quadratic(spec) == QuadraticClass::CaseII);
    const RicciReport report = ricci(spec.metric());
    CHECK(report.max_abs_ricci <= 1e-8 * std::max(report.scale, Real(1)));

    CHECK_THROWS_AS((void)tube_deformation(0.0, box), std::invalid_argument);
    SlabBox fat = box;
    fat.h = 5;
    CHECK_THROWS_AS((void)tube_deformation(0.5, fat), std::invalid_argument);
}

TEST_CASE("negative curvature tube") {
    SlabBox box;
    box.h = 0.2;
    CHECK(tube_deformation(-0.7, box).residual < 1e-10);
}
