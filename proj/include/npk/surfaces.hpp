#pragma once

// Closed-form minimal-energy isometries (cylinders, the rotated zero-
// stiffness family), analytic and finite-difference fundamental forms,
// structured quad meshes and OBJ export.

#include "npk/plate.hpp"
#include "npk/tensor.hpp"
#include "npk/types.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace npk {

struct Domain {
    Real a1 = 0, b1 = 1, a2 = 0, b2 = 1;

    Real width() const { return b1 - a1; }
    Real height() const { return b2 - a2; }
    Real area() const { return width() * height(); }
    void validate() const;
};

enum class SurfaceKind { Plane, CylinderX1, CylinderX2, RotatedCylinder, Custom };
const char* to_string(SurfaceKind k);

struct SurfacePoint {
    Vec3 position = Vec3::Zero();
    Mat32 tangent = Mat32::Zero();  ///< columns d1 y, d2 y
    Vec3 normal = Vec3::UnitZ();    ///< d1 y ^ d2 y (no sign renormalisation)
    Sym2 second_form{};
};

/// Analytic isometric immersion of a rectangle. All generators satisfy
/// (grad y)^T grad y = I2 and det A_y = 0 identically.
class IsometrySurface {
  public:
    /// Flat sheet y = (x1, x2, 0).
    static IsometrySurface plane(const Domain& omega);
    /// y = (sin(k x1)/k, x2, (cos(k x1)-1)/k); A_y = diag(k, 0); the k = 0
    /// limit degenerates to the plane.
    static IsometrySurface cylinder_x1(Real k, const Domain& omega);
    /// Roles of x1 and x2 swapped; A_y = diag(0, k).
    static IsometrySurface cylinder_x2(Real k, const Domain& omega);
    /// Rotated cylinder family: y^alpha = R_alpha^T ( y0 o R_alpha_check ),
    /// y0 the radius-rho cylinder through (0,0,rho); A = R^T diag(1/rho,0) R.
    /// rho may be negative (signed curvature 1/rho); rho = 0 is invalid.
    static IsometrySurface rotated_cylinder(Real alpha, Real rho, const Domain& omega);
    /// Caller-supplied evaluator (testing hook).
    static IsometrySurface custom(std::function<SurfacePoint(Real, Real)> eval,
                                  const Domain& omega);

    SurfacePoint operator()(Real x1, Real x2) const { return eval_(x1, x2); }
    const Domain& domain() const { return omega_; }
    SurfaceKind kind() const { return kind_; }
    /// Generator parameters: curvature k, or (alpha, rho).
    Real curvature() const { return k_; }
    Real rotation_angle() const { return alpha_; }
    Real radius() const { return rho_; }

  private:
    IsometrySurface() = default;
    SurfaceKind kind_ = SurfaceKind::Plane;
    Real k_ = 0, alpha_ = 0, rho_ = 0;
    Domain omega_{};
    std::function<SurfacePoint(Real, Real)> eval_;
};

struct FundamentalForms {
    Sym2 first{};
    Sym2 second{};
    bool one_sided = false;  ///< set when boundary forced one-sided differences
};

/// Central-difference first and second fundamental forms at (x1, x2);
/// switches to one-sided stencils against the domain boundary.
FundamentalForms fundamental_forms_numeric(const IsometrySurface& surface, Real x1, Real x2,
                                           Real step = 1e-4);

/// Sampled forms over an n1 x n2 parameter grid (row-major in x1).
std::vector<FundamentalForms> fundamental_forms_numeric(const IsometrySurface& surface, int n1,
                                                        int n2, Real step = 1e-4);

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<Vec3> normals;
    std::vector<std::array<int, 4>> quads;  ///< 0-based vertex indices
    int n1 = 0, n2 = 0;                     ///< parameter-grid dimensions
};

/// Structured quad mesh on an n1 x n2 vertex grid. Throws NumericalError on
/// non-finite vertices; requires n1, n2 >= 2.
SurfaceMesh build_mesh(const IsometrySurface& surface, int n1, int n2);

/// Deterministic OBJ bytes: `v`, `vn`, `f i//i ...` lines, 1-based indices,
/// 9 significant digits.
std::string export_obj(const SurfaceMesh& mesh);

/// Mesh plus its OBJ bytes in one call.
std::pair<SurfaceMesh, std::string> export_mesh(const IsometrySurface& surface, int n1, int n2);

/// Limit energy of the surface under the model, optionally with a constant
/// load vector f (adds -integral f . y): quadrature on an nx x ny grid.
Real energy_of_surface(const IsometrySurface& surface, const ReducedModel& model,
                       std::optional<Vec3> load = std::nullopt, int nx = 16, int ny = 16);

}  // namespace npk
