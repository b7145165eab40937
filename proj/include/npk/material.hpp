#pragma once

// Constitutive ingredients of the 3D model: the volume-preserving nematic
// step tensor, volumetric law, frame-indifferent base density w0, the
// through-thickness spontaneous strain profiles for the four textures, and
// the thickness-scaled energy densities built from them.

#include "npk/tensor.hpp"
#include "npk/types.hpp"

#include <functional>
#include <limits>
#include <string>

namespace npk {

enum class Texture { SplayBend, Twisted, ConstantNormal, Quadratic };

const char* to_string(Texture t);
Texture texture_from_string(const std::string& name);  // accepts CLI spellings

struct MaterialParams {
    Real mu = 1;      ///< shear modulus (stress units)
    Real kappa = 2;   ///< volumetric stiffness W_vol''(1) (stress units)
    Real alpha0 = 1;  ///< dimensionless nematic magnitude
    Real h0 = 1;      ///< reference length

    Real gamma() const { return gamma_ratio(mu, kappa); }
    Real delta0() const { return alpha0 / (2 * h0); }

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// L(n) = a^{2/3} n(x)n + a^{-1/3}(I - n(x)n). SPD with unit determinant;
/// eigenvalues {a^{2/3}, a^{-1/3}, a^{-1/3}} for any unit n.
Mat3 nematic_step_tensor(const Vec3& n, Real a);

/// Volumetric energy evaluator; any law with W(1)=0, divergence at 0+, and a
/// known second derivative at 1 can stand in for the default.
struct VolumetricLaw {
    std::function<Real(Real)> energy;  ///< +infinity for t <= 0
    Real dd_at_one = 0;

    Real operator()(Real t) const { return energy(t); }

    /// Default law kappa (t - 1 - log t); dd_at_one == kappa.
    static VolumetricLaw log_law(Real kappa);
};

/// Default volumetric energy kappa (t - 1 - log t); +infinity for t <= 0.
Real w_vol(Real t, Real kappa);
inline Real w_vol_dd1(Real kappa) { return kappa; }

/// w0(F) = mu/2 [|F|^2 - 3 - 2 log det F] + W_vol(det F).
/// Nonnegative, frame indifferent, zero exactly on SO(3).
Real w0(const Mat3& F, Real mu, const VolumetricLaw& vol);
Real w0(const Mat3& F, const MaterialParams& params);

/// Unit director field across the rescaled thickness t in (-1/2, 1/2).
class DirectorProfile {
  public:
    explicit DirectorProfile(Texture texture);  // Quadratic has no director
    Vec3 operator()(Real t) const;
    Texture texture() const { return texture_; }

  private:
    Texture texture_;
};

/// Thickness-parameterised spontaneous strain profile and its small-h limit
/// fields. Immutable after construction; evaluators are pure.
///
/// Physical coordinate z3 in (-h/2, h/2); rescaled coordinate x3 = z3/h in
/// (-1/2, 1/2). SPD of c_bar is checked on a 101-point grid at construction.
class StrainProfile {
  public:
    /// SplayBend / Twisted / ConstantNormal profile at physical thickness h.
    static StrainProfile make(Texture texture, const MaterialParams& params, Real h);

    /// Quadratic-in-thickness profile c_bar(z3) = I + delta0 z3 P + eta0 z3^2 R.
    static StrainProfile quadratic(const MaterialParams& params, Real h, const Mat3& P,
                                   Real eta0 = 0, const Mat3& R = Mat3::Zero());

    Texture texture() const { return texture_; }
    const MaterialParams& params() const { return params_; }
    Real thickness() const { return h_; }
    const Mat3& quadratic_linear_coefficient() const { return P_; }

    Mat3 c_bar(Real z3) const;      ///< physical spontaneous strain
    Mat3 c_bar_inv(Real z3) const;  ///< closed-form inverse
    Mat3 C_bar(Real x3) const { return c_bar(h_ * x3); }
    Mat3 C_bar_inv(Real x3) const { return c_bar_inv(h_ * x3); }
    Mat3 U_bar(Real x3) const { return spd_sqrt(C_bar(x3)); }
    Mat3 U_bar_inv(Real x3) const { return spd_sqrt_inv(C_bar(x3)); }

    Mat3 M(Real x3) const;       ///< N(x3) (x) N(x3); director textures only
    Sym2 M_check(Real x3) const;

    Mat3 B(Real x3) const;       ///< small-h limit field of the profile
    Sym2 B_check(Real x3) const; ///< upper-left 2x2 block of B

  private:
    StrainProfile() = default;
    void validate_spd() const;

    Texture texture_ = Texture::SplayBend;
    MaterialParams params_{};
    Real h_ = 0;
    Real eta0_ = 0;
    Mat3 P_ = Mat3::Zero();
    Mat3 R_ = Mat3::Zero();
};

/// Thickness-heterogeneous density
/// w_h(z3,F) = mu/2 [(F^T F) . c_bar^{-1}(z3) - 3 - 2 log det F] + W_vol(det F),
/// +infinity for det F <= 0. Vanishes exactly on SO(3) sqrt(c_bar(z3)).
/// Quadratic profiles use the equivalent multiplicative form
/// w0(F sqrt(c_bar)^{-1}), whose well stays exact without unit determinant.
Real w_h(Real z3, const Mat3& F, const StrainProfile& profile);

/// Rescaled density W^h(x3, F) = w_h(h x3, F).
Real W_h_rescaled(Real x3, const Mat3& F, const StrainProfile& profile);

/// The h->0 limit field B and its 2x2 truncation, as evaluators over the
/// rescaled thickness. Thin wrapper over StrainProfile::B / B_check.
std::pair<std::function<Mat3(Real)>, std::function<Sym2(Real)>> limit_b_field(
    const StrainProfile& profile);

/// Limit 2x2 field for a texture without constructing a finite-h profile
/// (the limit does not depend on h). Quadratic textures need the P matrix.
std::function<Sym2(Real)> limit_bcheck_field(Texture texture, const MaterialParams& params);
std::function<Sym2(Real)> quadratic_bcheck_field(const MaterialParams& params, const Mat3& P);

}  // namespace npk
