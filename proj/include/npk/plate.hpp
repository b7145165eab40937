#pragma once

// 2D limit plate energies on curvature fields, the constrained minimisation
// over developable curvature tensors (det A = 0), the brute-force oracle,
// and the zero-stiffness curvature family of the constant-normal texture.

#include "npk/reduction.hpp"
#include "npk/tensor.hpp"
#include "npk/types.hpp"

#include <utility>
#include <vector>

namespace npk {

/// Either a constant curvature tensor or uniform-weight samples over a
/// rectangular grid on the midplane domain.
struct CurvatureField {
    bool constant = true;
    Sym2 constant_value{};
    std::vector<Sym2> samples;
    Real domain_area = 1;

    static CurvatureField uniform(const Sym2& A, Real area) { return {true, A, {}, area}; }
    static CurvatureField sampled(std::vector<Sym2> values, Real area) {
        return {false, {}, std::move(values), area};
    }

    /// max |det A| over the field; developability witness.
    Real max_abs_det() const;
};

/// Energy density per unit midplane area: alpha/2 q2(A - target) + residual/2.
Real limit_energy_density(const Sym2& A, const ReducedModel& model);

/// Zero-load limit energy: integral of the density over the domain
/// (constant fields integrate exactly; sampled fields by uniform weights).
/// Rejects non-finite curvature entries.
Real limit_energy(const CurvatureField& field, const ReducedModel& model);

/// Physical-plate prefactor h0^3 applied when reporting physical energies.
inline Real physical_prefactor(Real h0) { return h0 * h0 * h0; }

enum class Multiplicity { Unique, Bistable, ContinuousFamily };
const char* to_string(Multiplicity m);

struct MinimiserSet {
    std::vector<Sym2> minimisers;   ///< all det = 0, all at the minimal value
    Real energy_per_area = 0;
    Multiplicity multiplicity = Multiplicity::Unique;
    Real family_curvature = 0;      ///< nonzero eigenvalue for the continuous family
};

/// Minimises limit_energy_density over {A in Sym(2): det A = 0}, using the
/// constraint-eliminating parametrisations (no penalties). Classification
/// by the eigenvalue pattern of the target at 1e-10 relative.
MinimiserSet minimise_over_developable(const ReducedModel& model);

struct BruteForceResult {
    Real value = 0;
    std::vector<Sym2> argmins;
};

/// Independent oracle: dense scan of A = [[xi, zeta],[zeta, eta]] with
/// zeta^2 = xi eta, plus the one-parameter critical branches
/// (xi_zeta^±, eta_zeta^±) when the target has a (-c, c) eigenvalue pair.
/// half_range <= 0 picks a range from the target scale.
BruteForceResult brute_force_developable_min(const ReducedModel& model, Real grid_step,
                                             Real half_range = 0);

/// Equal-energy curvature pair A_±(s) of the isotropic-target family,
/// |s| <= |kbar|/2; eigenvalues are exactly {kbar, 0}.
std::pair<Sym2, Sym2> zero_stiffness_family(const ReducedModel& model, Real s);

/// Rotations diagonalising A_±(s): A_+(s) = R_+ diag(kbar,0) R_+^T and
/// A_-(s) = R_- diag(0,kbar) R_-^T.
std::pair<Mat2, Mat2> zero_stiffness_rotations(const ReducedModel& model, Real s);

/// Nonzero family eigenvalue kbar = m0 (1+2 gamma)/(1+gamma) for an
/// isotropic target m0 I.
Real family_curvature(const ReducedModel& model);

}  // namespace npk
