#include "npk/scaling.hpp"

#include "npk/plate.hpp"
#include "npk/reduction.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace npk;
using namespace npk::testing;

namespace {
const MaterialParams params{1, 2, 2, 1};  // gamma = 0.5, delta0 = 1
const Domain omega{0, 1, 0, 1};
const GammaQuadrature coarse{4, 4, 16};  // columns are x'-independent here
}  // namespace

TEST_CASE("inactive material on a flat plate has zero energy") {
    const MaterialParams off{1, 2, 0, 1};  // alpha0 = 0
    const IsometrySurface plane = IsometrySurface::plane(omega);
    for (const Real h : {1e-2, 5e-3}) {
        const StrainProfile profile = StrainProfile::make(Texture::SplayBend, off, h);
        const AnsatzDeformation ansatz{plane, h, coarse, {}};
        CHECK(energy3d_rescaled(ansatz, profile) < 1e-20);
        // The optimal correction of a stress-free state is no correction.
        const AnsatzDeformation relaxed = optimise_fiber_correction(ansatz, profile);
        CHECK(energy3d_rescaled(relaxed, profile) < 1e-20);
    }
}

TEST_CASE("zero-correction ansatz matches a direct hand assembly") {
    const Real h = 1e-2;
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, h);
    const IsometrySurface cyl = IsometrySurface::cylinder_x1(-1.2, omega);
    const AnsatzDeformation ansatz{cyl, h, coarse, {}};
    const SurfacePoint p = cyl(0.3, 0.4);
    const Mat3 F = ansatz.rescaled_gradient(p, ColumnCorrection{}, 0.25);
    // In-plane columns: grad y (I + h x3 A); fiber column: the unit normal.
    const Mat2 inplane = Mat2::Identity() + h * 0.25 * p.second_form.matrix();
    CHECK((F.block<3, 2>(0, 0) - p.tangent * inplane).norm() < 1e-15);
    CHECK((F.col(2) - p.normal).norm() == 0);
}

TEST_CASE("corrections strictly lower the energy on active textures") {
    const Real h = 1e-2;
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, h);
    const ReducedModel model = reduce_texture(Texture::SplayBend, params);
    const IsometrySurface shell =
        IsometrySurface::cylinder_x1(model.target_curvature.xx, omega);
    const AnsatzDeformation raw{shell, h, coarse, {}};
    const Real before = energy3d_rescaled(raw, profile);
    const AnsatzDeformation relaxed = optimise_fiber_correction(raw, profile);
    const Real after = energy3d_rescaled(relaxed, profile);
    CHECK(after < 0.99 * before);  // at least 1% improvement
    // Never worse than the input corrections by construction.
    const AnsatzDeformation again = optimise_fiber_correction(relaxed, profile);
    CHECK(energy3d_rescaled(again, profile) <= after * (1 + 1e-12));
}

TEST_CASE("rescaled energy is frame indifferent") {
    const Real h = 5e-3;
    const StrainProfile profile = StrainProfile::make(Texture::Twisted, params, h);
    const IsometrySurface shell = IsometrySurface::cylinder_x1(-0.81, omega);
    const AnsatzDeformation ansatz{shell, h, coarse, {}};
    const Real base = energy3d_rescaled(ansatz, profile);

    const Mat3 rot = random_rotation();
    const IsometrySurface rotated = IsometrySurface::custom(
        [&shell, rot](Real x1, Real x2) {
            SurfacePoint p = shell(x1, x2);
            p.position = rot * p.position;
            p.tangent = rot * p.tangent;
            p.normal = rot * p.normal;
            return p;  // second form unchanged under a superposed rotation
        },
        omega);
    const AnsatzDeformation moved{rotated, h, coarse, {}};
    CHECK(energy3d_rescaled(moved, profile) == doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("degenerate gradients are reported with their location") {
    const Real h = 0.01;
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, h);
    // A folded "surface": zero tangent area makes det grad_h y vanish.
    const IsometrySurface degenerate = IsometrySurface::custom(
        [](Real x1, Real x2) {
            SurfacePoint p;
            p.position = Vec3(x1, x2, 0);
            p.tangent.col(0) = Vec3::UnitX();
            p.tangent.col(1) = Vec3::UnitX();  // collapsed frame
            p.normal = Vec3::UnitZ();
            p.second_form = Sym2::Zero();
            return p;
        },
        omega);
    const AnsatzDeformation ansatz{degenerate, h, coarse, {}};
    CHECK_THROWS_AS((void)energy3d_rescaled(ansatz, profile), NumericalError);
}

TEST_CASE("thickness mismatch and short sweeps are rejected") {
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, 0.01);
    const AnsatzDeformation ansatz{IsometrySurface::plane(omega), 0.02, coarse, {}};
    CHECK_THROWS_AS((void)energy3d_rescaled(ansatz, profile), std::invalid_argument);
    CHECK_THROWS_AS((void)scaling_study(Texture::SplayBend, params,
                                        IsometrySurface::plane(omega), {1e-2, 5e-3}),
                    std::invalid_argument);
}

TEST_CASE("energies never return NaN") {
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, 0.1);
    const Mat3 poisoned = Mat3::Identity() * std::numeric_limits<Real>::quiet_NaN();
    CHECK(std::isinf(w0(poisoned, params)));
    CHECK(std::isinf(w_h(0.0, poisoned, profile)));
    CHECK(std::isinf(w_vol(std::numeric_limits<Real>::quiet_NaN(), 2.0)));
}

TEST_CASE("through-thickness quadrature is converged at 16 nodes") {
    const Real h = 5e-3;
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, h);
    const IsometrySurface shell = IsometrySurface::cylinder_x1(-1.2159, omega);
    const AnsatzDeformation base{shell, h, GammaQuadrature{2, 2, 16}, {}};
    AnsatzDeformation doubled = base;
    doubled.quad.nt = 32;
    const Real coarse_value = energy3d_rescaled(base, profile);
    const Real fine_value = energy3d_rescaled(doubled, profile);
    CHECK(coarse_value == doctest::Approx(fine_value).epsilon(1e-10));
}

TEST_CASE("results are bit-identical across thread counts") {
    const Real h = 5e-3;
    const StrainProfile profile = StrainProfile::make(Texture::SplayBend, params, h);
    const IsometrySurface shell = IsometrySurface::cylinder_x1(-1.2159, omega);
    const AnsatzDeformation ansatz{shell, h, GammaQuadrature{5, 3, 16}, {}};

    setenv("NPK_THREADS", "1", 1);
    const AnsatzDeformation serial = optimise_fiber_correction(ansatz, profile);
    const Real serial_energy = energy3d_rescaled(serial, profile);
    setenv("NPK_THREADS", "2", 1);
    const AnsatzDeformation threaded = optimise_fiber_correction(ansatz, profile);
    const Real threaded_energy = energy3d_rescaled(threaded, profile);
    unsetenv("NPK_THREADS");

    CHECK(serial_energy == threaded_energy);  // exact: fixed reduction order
    REQUIRE(serial.corrections.size() == threaded.corrections.size());
    for (std::size_t i = 0; i < serial.corrections.size(); ++i)
        for (int k = 0; k <= ColumnCorrection::fiber_degree; ++k)
            CHECK((serial.corrections[i].d[std::size_t(k)] -
                   threaded.corrections[i].d[std::size_t(k)])
                      .norm() == 0);
}

TEST_CASE("quadratic profiles run through the scaling machinery") {
    // Frustrated target (det Pcheck != 0): the limit energy is positive and
    // the fiber needs are linear in x3, so the sweep converges tightly.
    const Mat3 p = Vec3(0.8, -0.4, 0.3).asDiagonal();
    const ReducedModel model = reduce_quadratic(params, p);
    const MinimiserSet mins = minimise_over_developable(model);
    REQUIRE(std::abs(mins.minimisers[0].xy) < 1e-9);  // axis-aligned for a diagonal target
    const IsometrySurface shell = IsometrySurface::cylinder_x1(mins.minimisers[0].xx, omega);
    const ScalingReport report = scaling_study(
        [&](Real h) { return StrainProfile::quadratic(params, h, p); }, model, shell,
        {8e-3, 4e-3, 2e-3}, coarse);
    CHECK(report.reference_elim > 0);
    CHECK(std::abs(report.extrapolated_limit - report.reference_elim) <
          0.02 * report.reference_elim);
    CHECK(report.raw_energy_exponent == doctest::Approx(2).epsilon(0.1));
}

TEST_CASE("scaling study converges to the reduced model's limit energy") {
    // Short sweep at coarse in-plane quadrature keeps this test quick; the
    // full acceptance run uses the spec sweep.
    const ReducedModel model = reduce_texture(Texture::Twisted, params);
    const MinimiserSet mins = minimise_over_developable(model);
    const IsometrySurface shell = IsometrySurface::cylinder_x1(mins.minimisers[0].xx, omega);
    const ScalingReport report =
        scaling_study(Texture::Twisted, params, shell, {8e-3, 4e-3, 2e-3, 1e-3}, coarse);

    CHECK(report.reference_elim ==
          doctest::Approx(mins.energy_per_area * omega.area()).epsilon(1e-9));
    CHECK(std::abs(report.extrapolated_limit - report.reference_elim) <
          0.02 * report.reference_elim);
    CHECK(report.raw_energy_exponent == doctest::Approx(2).epsilon(0.05));
    CHECK(report.gap_exponent > 0.5);
    CHECK(report.monotone);
    // h-values sorted decreasing, energies finite.
    for (std::size_t i = 1; i < report.h_values.size(); ++i)
        CHECK(report.h_values[i] < report.h_values[i - 1]);
    // Lower-bound direction: no value dips far below the limit.
    for (const Real e : report.rescaled_energies) CHECK(e >= 0.85 * report.reference_elim);
    // The gap to the limit shrinks monotonically along the sweep.
    for (std::size_t i = 1; i < report.rescaled_energies.size(); ++i)
        CHECK(std::abs(report.rescaled_energies[i] - report.reference_elim) <
              std::abs(report.rescaled_energies[i - 1] - report.reference_elim));
}
