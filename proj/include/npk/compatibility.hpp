#pragma once

// Riemannian compatibility machinery for metrics that depend on the
// thickness coordinate only: Christoffel symbols, the Ricci tensor, a
// scale-aware compatibility verdict, the four-case classifier for
// quadratic-in-thickness strains, and the bent-tube deformation realising
// the compatible quadratic case.

#include "npk/material.hpp"
#include "npk/tensor.hpp"
#include "npk/types.hpp"

#include <array>
#include <functional>
#include <vector>

namespace npk {

/// Metric profile t -> G(t), SPD, on (-half_width, half_width). Analytic
/// first/second derivatives are used when provided; otherwise central
/// finite differences with step fd_step (default 1e-5 of the slab width).
struct MetricProfile {
    std::function<Mat3(Real)> value;
    std::function<Mat3(Real)> derivative;         // optional
    std::function<Mat3(Real)> second_derivative;  // optional
    Real half_width = 0.5;
    Real fd_step = 0;

    Mat3 G(Real t) const { return value(t); }
    Mat3 dG(Real t) const;
    Mat3 ddG(Real t) const;
    Real step() const { return fd_step > 0 ? fd_step : 1e-5 * 2 * half_width; }

    static MetricProfile flat(Real h);
    /// Nematic strain metrics G = I + (a-1) n(t) (x) n(t), normalised by the
    /// constant volumetric factor (which leaves all curvatures unchanged).
    static MetricProfile splay_bend(Real a, Real h);
    static MetricProfile twisted(Real a, Real h);
    static MetricProfile from_strain_profile(const StrainProfile& profile);
};

/// Christoffel symbols of both kinds at one thickness sample.
/// first(i,j,l)  = Gamma_{ijl} = 1/2 (d_i G_jl + d_j G_il - d_l G_ij),
/// second(i,j,k) = Gamma_{ij}^k = G^{kl} Gamma_{ijl};
/// indices 0,1 in-plane, 2 the thickness direction.
struct Christoffels {
    std::array<Real, 27> first_kind{};
    std::array<Real, 27> second_kind{};

    Real first(int i, int j, int l) const { return first_kind[9 * i + 3 * j + l]; }
    Real& first(int i, int j, int l) { return first_kind[9 * i + 3 * j + l]; }
    Real second(int i, int j, int k) const { return second_kind[9 * i + 3 * j + k]; }
    Real& second(int i, int j, int k) { return second_kind[9 * i + 3 * j + k]; }
};

/// Throws NumericalError if G(t) is not SPD.
Christoffels christoffel(const MetricProfile& metric, Real t);

/// Ricci tensor R_ij = d_l Gamma_ij^l - d_j Gamma_il^l
///                     + Gamma_lk^l Gamma_ij^k - Gamma_jk^l Gamma_il^k
/// evaluated analytically (only the thickness derivative survives).
Mat3 ricci_tensor(const MetricProfile& metric, Real t);

enum class Verdict { Compatible, Incompatible };

struct RicciReport {
    std::vector<Real> grid;
    std::vector<Mat3> ricci;
    std::vector<Christoffels> christoffels;
    Real max_abs_ricci = 0;
    Real scale = 0;      ///< max|dG|^2 / min eig G over the grid
    Real threshold = 0;  ///< tol_factor * scale (plus a curvature-unit floor)
    Verdict verdict = Verdict::Incompatible;
};

/// Samples Ricci on an equispaced interior grid and decides compatibility
/// against the scale-aware threshold.
RicciReport ricci(const MetricProfile& metric, int grid_points = 41, Real tol_factor = 1e-7);

/// Max |R_lijk| of the (4,0) Riemann tensor over the grid; optional
/// cross-check of the Ricci route (equivalent in dimension 3).
Real max_riemann_abs(const MetricProfile& metric, int grid_points = 41);

/// Diagonal quadratic-in-thickness strain G(t) = I + t A + t^2 B.
struct QuadraticStrainSpec {
    Vec3 A = Vec3::Zero();   ///< diagonal of the linear coefficient (1/length)
    Vec3 Bq = Vec3::Zero();  ///< diagonal of the quadratic coefficient (1/length^2)
    Real h = 0.5;

    Mat3 G(Real t) const {
        return Mat3(Vec3(1 + t * A[0] + t * t * Bq[0], 1 + t * A[1] + t * t * Bq[1],
                         1 + t * A[2] + t * t * Bq[2])
                        .asDiagonal());
    }
    /// SPD on a thickness grid; throws otherwise.
    void validate() const;
    MetricProfile metric() const;
};

enum class QuadraticClass { CaseI, CaseII, CaseIII, CaseIV, Incompatible };
const char* to_string(QuadraticClass c);

/// Exact-coefficient classification of the quadratic strain into the four
/// compatible cases (identity; B11 = A11^2/4 pattern in index 1 or 2;
/// thickness-only) or Incompatible.
QuadraticClass classify_quadratic(const QuadraticStrainSpec& spec, Real tol = 1e-12);

struct SlabBox {
    Real s_min = -1, s_max = 1;
    Real z2_min = -1, z2_max = 1;
    Real h = 0.2;
};

/// Bent-tube deformation v(s,z2,t) = gamma(s) + t N(s) + z2 e2 built on a
/// planar unit-speed circle of signed curvature k. Its pulled-back metric is
/// diag((1-kt)^2, 1, 1) exactly.
struct TubeDeformation {
    Real k = 0;
    SlabBox box;
    Real residual = 0;  ///< max |grad v^T grad v - target| over the check grid

    Vec3 map(Real s, Real z2, Real t) const;
    Mat3 gradient(Real s, Real z2, Real t) const;  // analytic
    Mat3 target_metric(Real t) const;
};

/// Builds the tube and fills the residual over a grid^3 sample of the box.
/// Requires k != 0 and |k| h / 2 < 1.
TubeDeformation tube_deformation(Real k, const SlabBox& box, int grid = 21);

}  // namespace npk
