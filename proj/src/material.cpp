#include "npk/material.hpp"

#include <cmath>
#include <stdexcept>

namespace npk {

const char* to_string(Texture t) {
    switch (t) {
        case Texture::SplayBend: return "splay-bend";
        case Texture::Twisted: return "twisted";
        case Texture::ConstantNormal: return "constant-normal";
        case Texture::Quadratic: return "quadratic";
    }
    return "?";
}

Texture texture_from_string(const std::string& name) {
    if (name == "splay-bend" || name == "splaybend" || name == "sb") return Texture::SplayBend;
    if (name == "twisted" || name == "twist" || name == "t") return Texture::Twisted;
    if (name == "constant-normal" || name == "constantnormal" || name == "cn")
        return Texture::ConstantNormal;
    if (name == "quadratic" || name == "q") return Texture::Quadratic;
    throw std::invalid_argument("texture: unknown value '" + name + "'");
}

void MaterialParams::validate() const {
    if (!(mu > 0)) throw std::invalid_argument("mu must be positive");
    if (!(kappa > 0)) throw std::invalid_argument("kappa must be positive");
    // alpha0 = 0 is allowed: it switches the nematic activity off, which the
    // scaling checks use as the stress-free reference case.
    if (!(alpha0 >= 0)) throw std::invalid_argument("alpha0 must be nonnegative");
    if (!(h0 > 0)) throw std::invalid_argument("h0 must be positive");
}

Mat3 nematic_step_tensor(const Vec3& n, Real a) {
    if (std::abs(n.norm() - 1) > 1e-10)
        throw std::invalid_argument("nematic_step_tensor: director must be a unit vector");
    if (!(a > 0)) throw std::invalid_argument("nematic_step_tensor: magnitude a must be positive");
    const Mat3 nn = n * n.transpose();
    return std::pow(a, 2.0 / 3.0) * nn + std::pow(a, -1.0 / 3.0) * (Mat3::Identity() - nn);
}

VolumetricLaw VolumetricLaw::log_law(Real kappa) {
    return {[kappa](Real t) { return w_vol(t, kappa); }, kappa};
}

Real w_vol(Real t, Real kappa) {
    if (!(t > 0)) return std::numeric_limits<Real>::infinity();
    return kappa * (t - 1 - std::log(t));
}

Real w0(const Mat3& F, Real mu, const VolumetricLaw& vol) {
    const Real det = F.determinant();
    if (!(det > 0)) return std::numeric_limits<Real>::infinity();
    return mu / 2 * (F.squaredNorm() - 3 - 2 * std::log(det)) + vol(det);
}

Real w0(const Mat3& F, const MaterialParams& params) {
    const Real det = F.determinant();
    if (!(det > 0)) return std::numeric_limits<Real>::infinity();
    return params.mu / 2 * (F.squaredNorm() - 3 - 2 * std::log(det)) + w_vol(det, params.kappa);
}

DirectorProfile::DirectorProfile(Texture texture) : texture_(texture) {
    if (texture == Texture::Quadratic)
        throw std::invalid_argument("DirectorProfile: quadratic profiles carry no director");
}

Vec3 DirectorProfile::operator()(Real t) const {
    const Real f = pi / 4 + pi / 2 * t;
    switch (texture_) {
        case Texture::SplayBend: return {std::cos(f), 0, std::sin(f)};
        case Texture::Twisted: return {std::cos(f), std::sin(f), 0};
        case Texture::ConstantNormal: return {0, 0, 1};
        default: return {0, 0, 1};
    }
}

StrainProfile StrainProfile::make(Texture texture, const MaterialParams& params, Real h) {
    if (texture == Texture::Quadratic)
        throw std::invalid_argument("StrainProfile::make: use StrainProfile::quadratic");
    params.validate();
    if (!(h > 0)) throw std::invalid_argument("h must be positive");
    StrainProfile p;
    p.texture_ = texture;
    p.params_ = params;
    p.h_ = h;
    p.validate_spd();
    return p;
}

StrainProfile StrainProfile::quadratic(const MaterialParams& params, Real h, const Mat3& P,
                                       Real eta0, const Mat3& R) {
    params.validate();
    if (!(h > 0)) throw std::invalid_argument("h must be positive");
    if ((P - P.transpose()).norm() > 1e-12 * (1 + P.norm()))
        throw std::invalid_argument("P must be symmetric");
    StrainProfile p;
    p.texture_ = Texture::Quadratic;
    p.params_ = params;
    p.h_ = h;
    p.P_ = P;
    p.eta0_ = eta0;
    p.R_ = R;
    p.validate_spd();
    return p;
}

void StrainProfile::validate_spd() const {
    for (int i = 0; i < 101; ++i) {
        const Real z3 = h_ * (-0.5 + Real(i) / 100) * 0.9999;  // open interval
        Eigen::LLT<Mat3> llt(c_bar(z3));
        if (llt.info() != Eigen::Success)
            throw NumericalError("StrainProfile: c_bar is not SPD across the thickness "
                                 "(thickness too large for these parameters)");
    }
}

Mat3 StrainProfile::c_bar(Real z3) const {
    switch (texture_) {
        case Texture::SplayBend:
        case Texture::Twisted: {
            const Real a_h = 1 + params_.alpha0 * h_ / params_.h0;
            return nematic_step_tensor(DirectorProfile(texture_)(z3 / h_), a_h);
        }
        case Texture::ConstantNormal: {
            const Real a = 1 + params_.alpha0 / params_.h0 * z3;
            if (!(a > 0)) throw NumericalError("StrainProfile: order magnitude non-positive");
            return nematic_step_tensor(Vec3(0, 0, 1), a);
        }
        case Texture::Quadratic:
            return Mat3::Identity() + params_.delta0() * z3 * P_ + eta0_ * z3 * z3 * R_;
    }
    return Mat3::Identity();
}

Mat3 StrainProfile::c_bar_inv(Real z3) const {
    if (texture_ == Texture::Quadratic) return c_bar(z3).inverse();
    // L(n)^{-1} = a^{-2/3} n(x)n + a^{1/3} (I - n(x)n), closed form.
    Real a;
    Vec3 n;
    if (texture_ == Texture::ConstantNormal) {
        a = 1 + params_.alpha0 / params_.h0 * z3;
        n = Vec3(0, 0, 1);
    } else {
        a = 1 + params_.alpha0 * h_ / params_.h0;
        n = DirectorProfile(texture_)(z3 / h_);
    }
    const Mat3 nn = n * n.transpose();
    return std::pow(a, -2.0 / 3.0) * nn + std::pow(a, 1.0 / 3.0) * (Mat3::Identity() - nn);
}

Mat3 StrainProfile::M(Real x3) const {
    if (texture_ == Texture::Quadratic)
        throw std::logic_error("StrainProfile::M: quadratic profiles carry no director");
    const Vec3 n = DirectorProfile(texture_)(x3);
    return n * n.transpose();
}

Sym2 StrainProfile::M_check(Real x3) const {
    const Mat3 m = M(x3);
    return {m(0, 0), m(0, 1), m(1, 1)};
}

Mat3 StrainProfile::B(Real x3) const {
    const Real d0 = params_.delta0();
    switch (texture_) {
        case Texture::SplayBend:
        case Texture::Twisted:
            return -d0 * (M(x3) - Mat3::Identity() / 3);
        case Texture::ConstantNormal:
            // (x3/2)(alpha0/h0)(I/3 - n(x)n) with n = e3.
            return x3 * d0 * (Mat3::Identity() / 3 - M(x3));
        case Texture::Quadratic:
            return -(d0 * x3 / 2) * P_;
    }
    return Mat3::Zero();
}

Sym2 StrainProfile::B_check(Real x3) const {
    const Mat3 b = B(x3);
    return {b(0, 0), b(0, 1), b(1, 1)};
}

Real w_h(Real z3, const Mat3& F, const StrainProfile& profile) {
    const Real det = F.determinant();
    if (!(det > 0)) return std::numeric_limits<Real>::infinity();
    // Quadratic profiles need not preserve volume, so the well is pinned by
    // the multiplicative form; for the nematic textures det c_bar = 1 makes
    // the two forms identical and the trace formula is used directly.
    if (profile.texture() == Texture::Quadratic)
        return w0(Mat3(F * spd_sqrt_inv(profile.c_bar(z3))), profile.params());
    const Real mu = profile.params().mu;
    const Real trace_term = (F.transpose() * F).cwiseProduct(profile.c_bar_inv(z3)).sum();
    return mu / 2 * (trace_term - 3 - 2 * std::log(det)) + w_vol(det, profile.params().kappa);
}

Real W_h_rescaled(Real x3, const Mat3& F, const StrainProfile& profile) {
    return w_h(profile.thickness() * x3, F, profile);
}

std::pair<std::function<Mat3(Real)>, std::function<Sym2(Real)>> limit_b_field(
    const StrainProfile& profile) {
    return {[profile](Real x3) { return profile.B(x3); },
            [profile](Real x3) { return profile.B_check(x3); }};
}

std::function<Sym2(Real)> limit_bcheck_field(Texture texture, const MaterialParams& params) {
    if (texture == Texture::Quadratic)
        throw std::invalid_argument("limit_bcheck_field: quadratic textures need the P matrix");
    const Real d0 = params.delta0();
    if (texture == Texture::ConstantNormal) {
        // (n(x)n)^check vanishes for n = e3.
        return [d0](Real x3) { return Sym2::Diag(x3 * d0 / 3, x3 * d0 / 3); };
    }
    DirectorProfile director(texture);
    return [d0, director](Real x3) {
        const Vec3 n = director(x3);
        const Sym2 m_check{n[0] * n[0], n[0] * n[1], n[1] * n[1]};
        return -d0 * (m_check - Sym2::Diag(1.0 / 3, 1.0 / 3));
    };
}

std::function<Sym2(Real)> quadratic_bcheck_field(const MaterialParams& params, const Mat3& P) {
    const Real d0 = params.delta0();
    const Sym2 p_check{P(0, 0), P(0, 1), P(1, 1)};
    return [d0, p_check](Real x3) { return (-d0 * x3 / 2) * p_check; };
}

}  // namespace npk
