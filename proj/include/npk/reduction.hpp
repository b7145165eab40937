#pragma once

// Dimension reduction: the relaxed thickness-averaged quadratic form qbar2
// built from a limit strain field, and its canonical representation
// qbar2(G) = alpha q2(G - target) + residual.

#include "npk/material.hpp"
#include "npk/tensor.hpp"
#include "npk/types.hpp"

#include <functional>

namespace npk {

using BCheckField = std::function<Sym2(Real)>;

/// Reduced bending model: qbar2(G) = alpha * q2(G - target_curvature) + residual.
struct ReducedModel {
    Real alpha = 0;            ///< bending weight (dimensionless)
    Sym2 target_curvature{};   ///< spontaneous curvature target (1/length)
    Real residual = 0;         ///< energy floor from incompatible strains
    Real mu = 0, gamma = 0, delta0 = 0;
    Texture texture = Texture::SplayBend;

    Real qbar2_reconstructed(const Sym2& G) const {
        return alpha * q2(G - target_curvature, mu, gamma) + residual;
    }
};

/// qbar2(G) = min over D in Sym(2) of int q2(D + t G + bcheck(t)) dt on
/// (-1/2, 1/2); the inner minimum is solved exactly through the normal
/// equations of the strictly convex quadratic, assembled by quadrature.
Real qbar2(const Sym2& G, const BCheckField& bcheck, const MaterialParams& params);

/// The optimal D of the inner problem.
Sym2 inner_minimiser_d(const Sym2& G, const BCheckField& bcheck, const MaterialParams& params);

/// Recovers (alpha, target, residual) by evaluating qbar2 on a basis of
/// Sym(2), checking that the quadratic part is a positive multiple of q2's
/// coefficient matrix, and solving for the target. Throws NumericalError
/// ("not reducible to target-curvature form") when the structure check
/// fails beyond 1e-5 relative; warns on stderr between 1e-8 and 1e-5.
ReducedModel extract_reduced_model(const BCheckField& bcheck, const MaterialParams& params,
                                   Texture tag);

/// Convenience: reduce one of the named textures.
ReducedModel reduce_texture(Texture texture, const MaterialParams& params);

/// Reduce a quadratic-in-thickness profile with linear coefficient P
/// (the quadratic coefficient never enters the limit field).
ReducedModel reduce_quadratic(const MaterialParams& params, const Mat3& P);

/// Thickness moments of the in-plane director dyad, by quadrature.
struct MomentTable {
    Sym2 int_m_check{};        ///< int M_check dt
    Sym2 int_t_m_check{};      ///< int t M_check dt
    Real int_m_check_sq = 0;   ///< int |M_check|^2 dt
    Real int_t_tr_m_check = 0; ///< int t tr M_check dt
    Real int_cos2 = 0;         ///< int cos^2(pi/4 + pi t/2) dt
    Real int_sin_2f = 0;       ///< int sin(pi/2 + pi t) dt
    Real int_t_cos2 = 0;       ///< int t cos^2(pi/4 + pi t/2) dt
    Real int_t_sin_2f = 0;     ///< int t sin(pi/2 + pi t) dt
};

/// SplayBend or Twisted only.
MomentTable moment_integrals(Texture texture);

}  // namespace npk
