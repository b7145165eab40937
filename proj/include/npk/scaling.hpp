#pragma once

// Thin-film scaling probe: evaluates the rescaled 3D energy E^h/h^2 on
// bending ansatz deformations built from a 2D surface, relaxes per-column
// corrections, and fits the h-scaling against the 2D limit value.

#include "npk/material.hpp"
#include "npk/surfaces.hpp"
#include "npk/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace npk {

/// Per-column relaxation unknowns. The fiber polynomial of degree 4
/// corrects the through-thickness column of the rescaled gradient,
///   (d_{x3} y_h)/h = nu + h sum_k d[k] P_k(2 x3),
/// with P_k the Legendre polynomials (orthogonal on the rescaled thickness
/// interval, which keeps the relaxation well conditioned). The membrane
/// tensor adds the in-plane strain h D through a local in-plane
/// displacement, so the in-plane block becomes grad y (I2 + h x3 A_y + h D).
/// Degree 4 resolves the trigonometric fiber profiles of the splay-bend
/// texture; the twisted texture only ever uses the constant term.
struct ColumnCorrection {
    static constexpr int fiber_degree = 4;
    std::array<Vec3, fiber_degree + 1> d{Vec3::Zero(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero(),
                                         Vec3::Zero()};
    Sym2 membrane{};

    Vec3 fiber(Real x3) const {
        const Real u = 2 * x3;
        const Real p2 = (3 * u * u - 1) / 2;
        const Real p3 = (5 * u * u * u - 3 * u) / 2;
        const Real p4 = ((35 * u * u - 30) * u * u + 3) / 8;
        return d[0] + u * d[1] + p2 * d[2] + p3 * d[3] + p4 * d[4];
    }
};

struct GammaQuadrature {
    int nx = 16, ny = 16, nt = 16;
};

/// Kirchhoff-Love-type ansatz y_h(x', x3) = y(x') + h x3 nu(x') plus the
/// per-column corrections above (all zero when `corrections` is empty).
struct AnsatzDeformation {
    IsometrySurface surface;
    Real h = 0;
    GammaQuadrature quad{};
    std::vector<ColumnCorrection> corrections;  ///< empty, or quad.nx * quad.ny

    int columns() const { return quad.nx * quad.ny; }
    const ColumnCorrection& correction(int column) const;

    /// Rescaled gradient at one quadrature sample, assembled with the
    /// in-plane columns first and the h-scaled fiber column last.
    Mat3 rescaled_gradient(const SurfacePoint& p, const ColumnCorrection& c, Real x3) const;
};

/// Tensor-product Gauss quadrature of W^h(x3, grad_h y_h) over
/// omega x (-1/2, 1/2), divided by h^2. Throws NumericalError naming the
/// sample location if det grad_h y_h <= 0 anywhere.
Real energy3d_rescaled(const AnsatzDeformation& ansatz, const StrainProfile& profile);

/// Relaxes each column's correction by a deterministic derivative-free
/// pattern search; the result never increases the energy relative to the
/// input (falls back to the input coefficients on failure).
AnsatzDeformation optimise_fiber_correction(const AnsatzDeformation& ansatz,
                                            const StrainProfile& profile);

struct ScalingReport {
    std::vector<Real> h_values;           ///< strictly decreasing
    std::vector<Real> rescaled_energies;  ///< E^h / h^2
    Real extrapolated_limit = 0;          ///< quadratic-in-h fit through the last 3 points
    Real gap_exponent = 0;                ///< |E^h/h^2 - reference| ~ h^p
    Real raw_energy_exponent = 0;         ///< E^h ~ h^q, expect q near 2
    Real reference_elim = 0;
    bool monotone = true;                 ///< energies monotone along the sweep
};

using ProfileFactory = std::function<StrainProfile(Real)>;

/// Runs the h-sweep on the given base surface with optimised corrections.
/// Needs at least 3 thickness values; they are sorted decreasing. The
/// reference limit value comes from the reduced model on the surface.
ScalingReport scaling_study(const ProfileFactory& profile_at, const ReducedModel& model,
                            const IsometrySurface& surface, std::vector<Real> h_list,
                            const GammaQuadrature& quad = {});

/// Convenience overload for the named textures.
ScalingReport scaling_study(Texture texture, const MaterialParams& params,
                            const IsometrySurface& surface, std::vector<Real> h_list,
                            const GammaQuadrature& quad = {});

}  // namespace npk
