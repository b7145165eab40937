#pragma once

#include "npk/types.hpp"

#include <type_traits>
#include <utility>
#include <vector>

namespace npk {

struct QuadratureRule {
    std::vector<Real> nodes;
    std::vector<Real> weights;

    /// Integrate any value type supporting f(t)*w and operator+= (Real,
    /// Vec3, Mat3, Sym2, ...). Accumulates in the function's value type so
    /// Eigen expressions are materialised.
    template <typename F>
    auto integrate(F&& f) const {
        using Value = std::decay_t<std::invoke_result_t<F&, Real>>;
        Value acc = f(nodes[0]) * weights[0];
        for (std::size_t i = 1; i < nodes.size(); ++i) acc += f(nodes[i]) * weights[i];
        return acc;
    }
};

/// Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on the Legendre
/// recurrence (deterministic, accurate to round-off).
QuadratureRule gauss_legendre(int n);

/// Gauss-Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, Real a, Real b);

/// The fixed 64-point rule on (-1/2, 1/2) used for all through-thickness
/// integrals; cached, nodes identical across runs.
const QuadratureRule& thickness_rule();

}  // namespace npk
