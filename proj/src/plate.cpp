#include "npk/plate.hpp"

#include "npk/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace npk {

Real CurvatureField::max_abs_det() const {
    if (constant) return std::abs(constant_value.det());
    Real worst = 0;
    for (const auto& a : samples) worst = std::max(worst, std::abs(a.det()));
    return worst;
}

Real limit_energy_density(const Sym2& A, const ReducedModel& model) {
    return model.alpha / 2 * q2(A - model.target_curvature, model.mu, model.gamma) +
           model.residual / 2;
}

Real limit_energy(const CurvatureField& field, const ReducedModel& model) {
    if (!(model.alpha > 0)) throw std::invalid_argument("limit_energy: model alpha must be positive");
    if (field.constant) {
        if (!std::isfinite(field.constant_value.squaredNorm()))
            throw std::invalid_argument("limit_energy: curvature field has non-finite entries");
        return field.domain_area * limit_energy_density(field.constant_value, model);
    }
    if (field.samples.empty()) throw std::invalid_argument("limit_energy: empty sampled field");
    Real mean = 0;
    for (const auto& a : field.samples) {
        if (!std::isfinite(a.squaredNorm()))
            throw std::invalid_argument("limit_energy: curvature field has non-finite entries");
        mean += limit_energy_density(a, model);
    }
    return field.domain_area * mean / Real(field.samples.size());
}

const char* to_string(Multiplicity m) {
    switch (m) {
        case Multiplicity::Unique: return "Unique";
        case Multiplicity::Bistable: return "Bistable";
        case Multiplicity::ContinuousFamily: return "ContinuousFamily";
    }
    return "?";
}

Real family_curvature(const ReducedModel& model) {
    const auto [a1, a2] = model.target_curvature.eigenvalues();
    const Real m0 = (a1 + a2) / 2;
    return m0 * (1 + 2 * model.gamma) / (1 + model.gamma);
}

namespace {

/// Minimum over the rank-one cone A = kappa u(theta) (x) u(theta): for fixed
/// direction the optimal magnitude is closed-form; the direction is scanned
/// and golden-section refined. Handles any target.
std::pair<Real, Sym2> rank_one_minimum(const ReducedModel& model) {
    const Sym2& T = model.target_curvature;
    const Real g = model.gamma;
    auto density_of_theta = [&](Real theta) {
        const Real c = std::cos(theta), s = std::sin(theta);
        const Sym2 uu{c * c, c * s, s * s};
        const Real proj = uu.xx * T.xx + 2 * uu.xy * T.xy + uu.yy * T.yy;
        const Real kappa = (proj + g * T.trace()) / (1 + g);
        return std::pair{limit_energy_density(kappa * uu, model), kappa};
    };
    const int n = 2048;
    Real best_theta = 0, best_value = std::numeric_limits<Real>::max();
    for (int i = 0; i < n; ++i) {
        const Real theta = pi * i / n;
        const Real v = density_of_theta(theta).first;
        if (v < best_value) {
            best_value = v;
            best_theta = theta;
        }
    }
    Real lo = best_theta - pi / n, hi = best_theta + pi / n;
    const Real ratio = 0.5 * (std::sqrt(5.0) - 1);
    Real x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    Real f1 = density_of_theta(x1).first, f2 = density_of_theta(x2).first;
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = density_of_theta(x1).first;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = density_of_theta(x2).first;
        }
    }
    Real theta = (lo + hi) / 2;
    // Snap to the nearest quarter-turn when it is at least as good; keeps
    // axis-aligned minimisers of diagonal targets exact.
    const Real snapped = std::round(theta / (pi / 2)) * (pi / 2);
    if (density_of_theta(snapped).first <= density_of_theta(theta).first) theta = snapped;
    const auto [value, kappa] = density_of_theta(theta);
    const Real c = std::cos(theta), s = std::sin(theta);
    return {value, kappa * Sym2{c * c, c * s, s * s}};
}

}  // namespace

MinimiserSet minimise_over_developable(const ReducedModel& model) {
    if (!(model.alpha > 0))
        throw std::invalid_argument("minimise_over_developable: model alpha must be positive");
    const Sym2& T = model.target_curvature;
    Eigen::SelfAdjointEigenSolver<Mat2> es(T.matrix());
    const Vec2 ev = es.eigenvalues();  // ascending
    const Mat2 R = es.eigenvectors();
    const Real scale = std::max(std::abs(ev[0]), std::abs(ev[1]));
    const Real tol = 1e-10 * std::max(scale, Real(1e-300));

    MinimiserSet out;
    auto push_rotated = [&](const Sym2& diag_min) {
        out.minimisers.push_back(Sym2::from_matrix(R * diag_min.matrix() * R.transpose()));
    };

    if (scale <= 1e-14) {  // zero target: flat plate
        out.multiplicity = Multiplicity::Unique;
        out.minimisers.push_back(Sym2::Zero());
        out.energy_per_area = limit_energy_density(Sym2::Zero(), model);
        return out;
    }
    if (std::min(std::abs(ev[0]), std::abs(ev[1])) <= tol) {
        // Target is itself developable: unconstrained optimum is admissible.
        out.multiplicity = Multiplicity::Unique;
        out.minimisers.push_back(T);
        out.energy_per_area = limit_energy_density(T, model);
        return out;
    }
    if (std::abs(ev[0] - ev[1]) <= tol) {
        // Isotropic target m0 I: a full rotation orbit of minimisers.
        out.multiplicity = Multiplicity::ContinuousFamily;
        const Real kbar = family_curvature(model);
        out.family_curvature = kbar;
        out.minimisers.push_back(Sym2::Diag(kbar, 0));
        out.minimisers.push_back(Sym2::Diag(0, kbar));
        out.energy_per_area = limit_energy_density(out.minimisers.front(), model);
        return out;
    }
    if (std::abs(ev[0] + ev[1]) <= tol) {
        // Opposite eigenvalue pair diag(a, -a): two cylinders, one per
        // principal direction, exchanged by (A11, A22) -> (-A22, -A11).
        out.multiplicity = Multiplicity::Bistable;
        // es orders ascending; in the eigenbasis the target is diag(ev0, ev1).
        push_rotated(Sym2::Diag(ev[0] / (1 + model.gamma), 0));
        push_rotated(Sym2::Diag(0, ev[1] / (1 + model.gamma)));
        out.energy_per_area = limit_energy_density(out.minimisers.front(), model);
        return out;
    }
    // Generic anisotropic target: computed minimiser on the rank-one cone.
    out.multiplicity = Multiplicity::Unique;
    auto [value, argmin] = rank_one_minimum(model);
    out.minimisers.push_back(argmin);
    out.energy_per_area = value;
    return out;
}

BruteForceResult brute_force_developable_min(const ReducedModel& model, Real grid_step,
                                             Real half_range) {
    const Sym2& T = model.target_curvature;
    if (half_range <= 0) half_range = 2.5 * std::max(T.norm(), Real(1));
    const long n = std::lround(half_range / grid_step);

    BruteForceResult best;
    best.value = std::numeric_limits<Real>::max();
    Sym2 best_a{};

    // Dense scan of the constraint surface zeta = ±sqrt(xi eta), one row of
    // xi per work item; rows are merged in index order so the result does
    // not depend on the chunking.
    std::vector<std::pair<Real, Sym2>> row_best(std::size_t(2 * n + 1),
                                                {std::numeric_limits<Real>::max(), Sym2{}});
    parallel_for(int(2 * n + 1), [&](int row) {
        const Real xi = (row - n) * grid_step;
        auto& slot = row_best[std::size_t(row)];
        for (long j = -n; j <= n; ++j) {
            const Real eta = j * grid_step;
            const Real prod = xi * eta;
            if (prod < 0) continue;
            const Real zeta = std::sqrt(prod);
            for (int sign = zeta > 0 ? -1 : 1; sign <= 1; sign += 2) {
                const Real v = limit_energy_density({xi, sign * zeta, eta}, model);
                if (v < slot.first) slot = {v, {xi, sign * zeta, eta}};
            }
        }
    });
    for (const auto& [value, a] : row_best)
        if (value < best.value) {
            best.value = value;
            best_a = a;
        }

    auto consider = [&](Real xi, Real eta, Real zeta) {
        const Real v = limit_energy_density({xi, zeta, eta}, model);
        if (v < best.value) {
            best.value = v;
            best_a = {xi, zeta, eta};
        }
    };

    // Critical branches of the symmetric-pair case, scanned over zeta.
    const auto [a1, a2] = T.eigenvalues();
    if (std::abs(a1 + a2) <= 1e-8 * std::max(std::abs(a1), std::abs(a2))) {
        const Real aT = a1;  // target diag(aT, -aT) in its eigenbasis
        const Real base = aT / (1 + model.gamma);
        for (long i = -n; i <= n; ++i) {
            const Real zeta = i * grid_step;
            const Real root = std::sqrt(base * base + 4 * zeta * zeta);
            for (int sign = -1; sign <= 1; sign += 2) {
                const Real xi = (base + sign * root) / 2;
                const Real eta = (-base + sign * root) / 2;
                consider(xi, eta, zeta);
            }
        }
    }

    // Collect grid candidates near the optimum and cluster them by
    // position, keeping the best-value point of each cluster.
    const Real keep = best.value + 16 * grid_step * grid_step * (1 + model.alpha * model.mu);
    std::vector<std::pair<Real, Sym2>> raw;
    auto gather = [&](Real xi, Real eta, Real zeta) {
        const Real v = limit_energy_density({xi, zeta, eta}, model);
        if (v <= keep) raw.push_back({v, {xi, zeta, eta}});
    };
    for (long i = -n; i <= n; ++i)
        for (long j = -n; j <= n; ++j) {
            const Real xi = i * grid_step, eta = j * grid_step;
            const Real prod = xi * eta;
            if (prod < 0) continue;
            const Real zeta = std::sqrt(prod);
            gather(xi, eta, zeta);
            if (zeta > 0) gather(xi, eta, -zeta);
        }
    std::stable_sort(raw.begin(), raw.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [value, a] : raw) {
        bool fresh = true;
        for (const auto& seen : best.argmins)
            if ((a - seen).norm() < 64 * grid_step) {
                fresh = false;
                break;
            }
        if (fresh) best.argmins.push_back(a);
    }
    if (best.argmins.empty()) best.argmins.push_back(best_a);
    return best;
}

std::pair<Sym2, Sym2> zero_stiffness_family(const ReducedModel& model, Real s) {
    const Real kbar = family_curvature(model);
    if (!(std::abs(s) <= std::abs(kbar) / 2 + 1e-15))
        throw std::invalid_argument("zero_stiffness_family: |s| must not exceed |kbar|/2");
    // Root taken with the sign of kbar so that A_+(0) = diag(kbar, 0).
    const Real r = (kbar >= 0 ? 1 : -1) * std::sqrt(std::max<Real>(0, kbar * kbar - 4 * s * s));
    const Sym2 plus{(kbar + r) / 2, s, (kbar - r) / 2};
    const Sym2 minus{(kbar - r) / 2, s, (kbar + r) / 2};
    return {plus, minus};
}

std::pair<Mat2, Mat2> zero_stiffness_rotations(const ReducedModel& model, Real s) {
    const Real kbar = family_curvature(model);
    if (!(std::abs(s) <= std::abs(kbar) / 2 + 1e-15))
        throw std::invalid_argument("zero_stiffness_rotations: |s| must not exceed |kbar|/2");
    const Real r = (kbar >= 0 ? 1 : -1) * std::sqrt(std::max<Real>(0, kbar * kbar - 4 * s * s));
    const Real scale = std::sqrt((kbar + r) / (2 * kbar));
    const Real off = 2 * s / (kbar + r);
    Mat2 r_plus, r_minus;
    r_plus << 1, -off, off, 1;
    r_minus << 1, off, -off, 1;
    return {scale * r_plus, scale * r_minus};
}

}  // namespace npk
