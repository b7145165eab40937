#include "npk/reduction.hpp"

#include "npk/quadrature.hpp"

#include <cmath>
#include <iostream>

namespace npk {

namespace {

Vec3 flattened_path(Real t, const Sym2& G, const BCheckField& bcheck) {
    return (t * G + bcheck(t)).flatten();
}

}  // namespace

Sym2 inner_minimiser_d(const Sym2& G, const BCheckField& bcheck, const MaterialParams& params) {
    params.validate();
    const auto& rule = thickness_rule();
    const Mat3 Q = q2_coefficient_matrix(params.mu, params.gamma());
    // Normal equations of d -> int (d + x(t))^T Q (d + x(t)) dt.
    const Mat3 A = Q;  // Q is t-independent; int Q dt over a unit interval
    const Vec3 b = rule.integrate([&](Real t) -> Vec3 { return Q * flattened_path(t, G, bcheck); });
    if (!b.allFinite()) throw NumericalError("qbar2: non-finite integrand in the limit field");
    Eigen::LDLT<Mat3> ldlt(A);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericalError("qbar2: inner normal equations not SPD");
    return Sym2::unflatten(ldlt.solve(-b));
}

Real qbar2(const Sym2& G, const BCheckField& bcheck, const MaterialParams& params) {
    const Sym2 D = inner_minimiser_d(G, bcheck, params);
    const Real mu = params.mu, gamma = params.gamma();
    const Real value =
        thickness_rule().integrate([&](Real t) { return q2(D + t * G + bcheck(t), mu, gamma); });
    if (!std::isfinite(value)) throw NumericalError("qbar2: non-finite integrand in the limit field");
    return value;
}

ReducedModel extract_reduced_model(const BCheckField& bcheck, const MaterialParams& params,
                                   Texture tag) {
    auto value = [&](const Sym2& G) { return qbar2(G, bcheck, params); };

    const Sym2 basis[3] = {{1, 0, 0}, {0, 1.0 / std::sqrt(2.0), 0}, {0, 0, 1}};
    const Real c0 = value(Sym2::Zero());
    Mat3 C;
    Vec3 lin;
    for (int i = 0; i < 3; ++i) {
        const Real plus = value(basis[i]);
        const Real minus = value(-basis[i]);
        lin[i] = (plus - minus) / 2;
        C(i, i) = (plus + minus) / 2 - c0;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const Real both = value(basis[i] + basis[j]);
            C(i, j) = C(j, i) = (both - c0 - lin[i] - lin[j] - C(i, i) - C(j, j)) / 2;
        }

    // Structure check: C must be a positive multiple of q2's coefficient matrix.
    const Mat3 Q = q2_coefficient_matrix(params.mu, params.gamma());
    const Real alpha = (C.cwiseProduct(Q)).sum() / Q.squaredNorm();
    const Real rel = (C - alpha * Q).norm() / (std::abs(alpha) * Q.norm());
    if (!(alpha > 0) || rel > 1e-5)
        throw NumericalError("extract_reduced_model: not reducible to target-curvature form");
    if (rel > 1e-8)
        std::cerr << "warning: extract_reduced_model: quadratic part deviates from q2 by "
                  << rel << " relative; using least-squares fit\n";

    ReducedModel model;
    model.alpha = alpha;
    model.mu = params.mu;
    model.gamma = params.gamma();
    model.delta0 = params.delta0();
    model.texture = tag;
    // Linear part of alpha q2(G - target) is -2 alpha Q target.
    Eigen::LDLT<Mat3> ldlt(Q);
    model.target_curvature = Sym2::unflatten(ldlt.solve(-lin / (2 * alpha)));
    model.residual = value(model.target_curvature);
    return model;
}

ReducedModel reduce_texture(Texture texture, const MaterialParams& params) {
    if (texture == Texture::Quadratic)
        throw std::invalid_argument("reduce_texture: quadratic textures need reduce_quadratic");
    return extract_reduced_model(limit_bcheck_field(texture, params), params, texture);
}

ReducedModel reduce_quadratic(const MaterialParams& params, const Mat3& P) {
    return extract_reduced_model(quadratic_bcheck_field(params, P), params, Texture::Quadratic);
}

MomentTable moment_integrals(Texture texture) {
    if (texture != Texture::SplayBend && texture != Texture::Twisted)
        throw std::invalid_argument("moment_integrals: splay-bend or twisted only");
    DirectorProfile director(texture);
    auto m_check = [&](Real t) {
        const Vec3 n = director(t);
        return Sym2{n[0] * n[0], n[0] * n[1], n[1] * n[1]};
    };
    const auto& rule = thickness_rule();
    MomentTable table;
    table.int_m_check = rule.integrate(m_check);
    table.int_t_m_check = rule.integrate([&](Real t) { return t * m_check(t); });
    table.int_m_check_sq = rule.integrate([&](Real t) { return m_check(t).squaredNorm(); });
    table.int_t_tr_m_check = rule.integrate([&](Real t) { return t * m_check(t).trace(); });
    table.int_cos2 = rule.integrate([](Real t) { return std::pow(std::cos(pi / 4 + pi / 2 * t), 2); });
    table.int_sin_2f = rule.integrate([](Real t) { return std::sin(pi / 2 + pi * t); });
    table.int_t_cos2 =
        rule.integrate([](Real t) { return t * std::pow(std::cos(pi / 4 + pi / 2 * t), 2); });
    table.int_t_sin_2f = rule.integrate([](Real t) { return t * std::sin(pi / 2 + pi * t); });
    return table;
}

}  // namespace npk
