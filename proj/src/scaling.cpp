#include "npk/scaling.hpp"

#include "npk/parallel.hpp"
#include "npk/quadrature.hpp"
#include "npk/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace npk {

namespace {

const ColumnCorrection kZeroCorrection{};

/// Cached through-thickness data for one profile: nodes, weights, and the
/// per-node well matrix (inverse strain, or inverse well root for profiles
/// that do not preserve volume).
struct FiberQuadrature {
    std::vector<Real> nodes, weights;
    std::vector<Mat3> well;
    bool multiplicative = false;
    Real mu = 0, kappa = 0;

    FiberQuadrature(const StrainProfile& profile, int nt) {
        const QuadratureRule rule = gauss_legendre(nt, -0.5, 0.5);
        nodes = rule.nodes;
        weights = rule.weights;
        multiplicative = profile.texture() == Texture::Quadratic;
        well.reserve(nodes.size());
        for (const Real x3 : nodes)
            well.push_back(multiplicative ? spd_sqrt_inv(profile.C_bar(x3))
                                          : profile.C_bar_inv(x3));
        mu = profile.params().mu;
        kappa = profile.params().kappa;
    }

    Real density(int k, const Mat3& F) const {
        if (multiplicative) {
            const Mat3 composed = F * well[std::size_t(k)];
            const Real det = composed.determinant();
            if (!(det > 0)) return std::numeric_limits<Real>::infinity();
            return mu / 2 * (composed.squaredNorm() - 3 - 2 * std::log(det)) + w_vol(det, kappa);
        }
        const Real det = F.determinant();
        if (!(det > 0)) return std::numeric_limits<Real>::infinity();
        const Real trace_term = (F.transpose() * F).cwiseProduct(well[std::size_t(k)]).sum();
        return mu / 2 * (trace_term - 3 - 2 * std::log(det)) + w_vol(det, kappa);
    }
};

struct ColumnGeometry {
    Mat32 tangent;
    Vec3 normal;
    Mat2 second_form;
};

Mat3 assemble_gradient(const ColumnGeometry& g, const ColumnCorrection& c, Real h, Real x3) {
    const Mat2 inplane =
        Mat2::Identity() + h * x3 * g.second_form + h * c.membrane.matrix();
    Mat3 F;
    F.template block<3, 2>(0, 0) = g.tangent * inplane;
    F.col(2) = g.normal + h * c.fiber(x3);
    return F;
}

/// Fiber-integrated energy of one column for given correction coefficients.
Real column_energy(const FiberQuadrature& fq, const ColumnGeometry& g, const ColumnCorrection& c,
                   Real h) {
    Real acc = 0;
    for (std::size_t k = 0; k < fq.nodes.size(); ++k) {
        const Mat3 F = assemble_gradient(g, c, h, fq.nodes[k]);
        acc += fq.weights[k] * fq.density(int(k), F);
    }
    return acc;
}

constexpr int kUnknowns = 3 * (ColumnCorrection::fiber_degree + 1) + 3;
using CoeffVec = Eigen::Matrix<Real, kUnknowns, 1>;

ColumnCorrection from_coeffs(const CoeffVec& u) {
    ColumnCorrection c;
    for (int k = 0; k <= ColumnCorrection::fiber_degree; ++k) c.d[std::size_t(k)] = u.segment<3>(3 * k);
    c.membrane = {u[kUnknowns - 3], u[kUnknowns - 2], u[kUnknowns - 1]};
    return c;
}

CoeffVec to_coeffs(const ColumnCorrection& c) {
    CoeffVec u;
    for (int k = 0; k <= ColumnCorrection::fiber_degree; ++k) u.segment<3>(3 * k) = c.d[std::size_t(k)];
    u[kUnknowns - 3] = c.membrane.xx;
    u[kUnknowns - 2] = c.membrane.xy;
    u[kUnknowns - 1] = c.membrane.yy;
    return u;
}

/// Greedy coordinate pattern search with step halving; deterministic.
ColumnCorrection relax_column(const FiberQuadrature& fq, const ColumnGeometry& g, Real h,
                              const ColumnCorrection& start, Real scale) {
    CoeffVec u = to_coeffs(start);
    auto objective = [&](const CoeffVec& v) { return column_energy(fq, g, from_coeffs(v), h); };
    Real best = objective(u);
    if (!std::isfinite(best)) return start;

    Real step = 0.25 * scale;
    const Real floor = 1e-9 * scale;
    int sweeps = 0;
    while (step > floor && sweeps < 1500) {
        bool improved = false;
        for (int i = 0; i < kUnknowns; ++i)
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                CoeffVec trial = u;
                trial[i] += sgn * step;
                const Real v = objective(trial);
                if (v < best) {
                    best = v;
                    u = trial;
                    improved = true;
                }
            }
        if (!improved) step /= 2;
        ++sweeps;
    }
    return from_coeffs(u);
}

struct OmegaGrid {
    QuadratureRule rx, ry;
    int nx, ny;

    explicit OmegaGrid(const IsometrySurface& s, const GammaQuadrature& q)
        : rx(gauss_legendre(q.nx, s.domain().a1, s.domain().b1)),
          ry(gauss_legendre(q.ny, s.domain().a2, s.domain().b2)),
          nx(q.nx),
          ny(q.ny) {}

    int columns() const { return nx * ny; }
    Real x1(int c) const { return rx.nodes[c / ny]; }
    Real x2(int c) const { return ry.nodes[c % ny]; }
    Real weight(int c) const { return rx.weights[c / ny] * ry.weights[c % ny]; }
};

ColumnGeometry geometry_at(const IsometrySurface& surface, Real x1, Real x2) {
    const SurfacePoint p = surface(x1, x2);
    return {p.tangent, p.normal, p.second_form.matrix()};
}

}  // namespace

const ColumnCorrection& AnsatzDeformation::correction(int column) const {
    if (corrections.empty()) return kZeroCorrection;
    return corrections.at(std::size_t(column));
}

Mat3 AnsatzDeformation::rescaled_gradient(const SurfacePoint& p, const ColumnCorrection& c,
                                          Real x3) const {
    return assemble_gradient({p.tangent, p.normal, p.second_form.matrix()}, c, h, x3);
}

Real energy3d_rescaled(const AnsatzDeformation& ansatz, const StrainProfile& profile) {
    if (std::abs(profile.thickness() - ansatz.h) > 1e-12 * ansatz.h)
        throw std::invalid_argument("energy3d_rescaled: profile thickness differs from ansatz h");
    if (!ansatz.corrections.empty() && int(ansatz.corrections.size()) != ansatz.columns())
        throw std::invalid_argument("energy3d_rescaled: corrections size mismatch");

    const OmegaGrid grid(ansatz.surface, ansatz.quad);
    const FiberQuadrature fq(profile, ansatz.quad.nt);

    std::vector<Real> column_values(std::size_t(grid.columns()), 0);
    std::vector<int> bad_node(std::size_t(grid.columns()), -1);
    parallel_for(grid.columns(), [&](int c) {
        const ColumnGeometry g = geometry_at(ansatz.surface, grid.x1(c), grid.x2(c));
        const ColumnCorrection& corr = ansatz.correction(c);
        Real acc = 0;
        for (std::size_t k = 0; k < fq.nodes.size(); ++k) {
            const Mat3 F = assemble_gradient(g, corr, ansatz.h, fq.nodes[k]);
            const Real w = fq.density(int(k), F);
            if (!std::isfinite(w)) {
                bad_node[std::size_t(c)] = int(k);
                return;
            }
            acc += fq.weights[k] * w;
        }
        column_values[std::size_t(c)] = acc;
    });

    Real total = 0;
    for (int c = 0; c < grid.columns(); ++c) {
        if (bad_node[std::size_t(c)] >= 0) {
            std::ostringstream msg;
            msg << "energy3d_rescaled: non-positive determinant at x' = (" << grid.x1(c) << ", "
                << grid.x2(c) << "), x3 = " << fq.nodes[std::size_t(bad_node[std::size_t(c)])];
            throw NumericalError(msg.str());
        }
        total += grid.weight(c) * column_values[std::size_t(c)];
    }
    return total / (ansatz.h * ansatz.h);
}

AnsatzDeformation optimise_fiber_correction(const AnsatzDeformation& ansatz,
                                            const StrainProfile& profile) {
    const OmegaGrid grid(ansatz.surface, ansatz.quad);
    const FiberQuadrature fq(profile, ansatz.quad.nt);

    AnsatzDeformation out = ansatz;
    out.corrections.assign(std::size_t(grid.columns()), ColumnCorrection{});

    Real curvature_scale = 0;
    {
        const ColumnGeometry g0 = geometry_at(ansatz.surface, grid.x1(0), grid.x2(0));
        curvature_scale = g0.second_form.norm();
    }
    const Real scale = std::max<Real>(profile.params().delta0() + curvature_scale, 0.1);

    // The first column is relaxed from scratch; the rest are warm-started
    // from it (columns of the in-scope surfaces are identical problems).
    const ColumnCorrection seed =
        relax_column(fq, geometry_at(ansatz.surface, grid.x1(0), grid.x2(0)), ansatz.h,
                     ansatz.correction(0), scale);
    out.corrections[0] = seed;
    parallel_for(grid.columns() - 1, [&](int i) {
        const int c = i + 1;
        const ColumnGeometry g = geometry_at(ansatz.surface, grid.x1(c), grid.x2(c));
        out.corrections[std::size_t(c)] = relax_column(fq, g, ansatz.h, seed, scale);
    });

    // Guarantee: never worse than the input corrections.
    parallel_for(grid.columns(), [&](int c) {
        const ColumnGeometry g = geometry_at(ansatz.surface, grid.x1(c), grid.x2(c));
        if (column_energy(fq, g, out.corrections[std::size_t(c)], ansatz.h) >
            column_energy(fq, g, ansatz.correction(c), ansatz.h))
            out.corrections[std::size_t(c)] = ansatz.correction(c);
    });
    return out;
}

ScalingReport scaling_study(const ProfileFactory& profile_at, const ReducedModel& model,
                            const IsometrySurface& surface, std::vector<Real> h_list,
                            const GammaQuadrature& quad) {
    if (h_list.size() < 3)
        throw std::invalid_argument("scaling_study: need at least 3 thickness values");
    std::sort(h_list.begin(), h_list.end(), std::greater<Real>());

    ScalingReport report;
    report.h_values = h_list;
    report.reference_elim = energy_of_surface(surface, model);

    std::vector<ColumnCorrection> warm_start;
    for (const Real h : h_list) {
        const StrainProfile profile = profile_at(h);
        AnsatzDeformation ansatz{surface, h, quad, warm_start};
        const AnsatzDeformation relaxed = optimise_fiber_correction(ansatz, profile);
        report.rescaled_energies.push_back(energy3d_rescaled(relaxed, profile));
        warm_start = relaxed.corrections;
    }

    for (std::size_t i = 2; i < report.rescaled_energies.size(); ++i) {
        const Real step_prev = report.rescaled_energies[i - 1] - report.rescaled_energies[i - 2];
        const Real step_here = report.rescaled_energies[i] - report.rescaled_energies[i - 1];
        if (step_prev * step_here < 0) report.monotone = false;
    }

    // Extrapolation: E(h) = L + c1 h + c2 h^2 through the last three points.
    {
        const std::size_t n = h_list.size();
        Eigen::Matrix3d V;
        Vec3 rhs;
        for (int r = 0; r < 3; ++r) {
            const Real h = h_list[n - 3 + std::size_t(r)];
            V.row(r) << 1, h, h * h;
            rhs[r] = report.rescaled_energies[n - 3 + std::size_t(r)];
        }
        report.extrapolated_limit = V.fullPivLu().solve(rhs)[0];
    }

    // Log-log least-squares slopes.
    auto slope = [](const std::vector<Real>& xs, const std::vector<Real>& ys) {
        Real sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!(ys[i] > 0)) continue;
            const Real lx = std::log(xs[i]), ly = std::log(ys[i]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++n;
        }
        if (n < 2) return Real(0);
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    std::vector<Real> gaps, raws;
    for (std::size_t i = 0; i < h_list.size(); ++i) {
        gaps.push_back(std::abs(report.rescaled_energies[i] - report.reference_elim));
        raws.push_back(report.rescaled_energies[i] * h_list[i] * h_list[i]);
    }
    report.gap_exponent = slope(h_list, gaps);
    report.raw_energy_exponent = slope(h_list, raws);
    return report;
}

ScalingReport scaling_study(Texture texture, const MaterialParams& params,
                            const IsometrySurface& surface, std::vector<Real> h_list,
                            const GammaQuadrature& quad) {
    if (texture == Texture::Quadratic)
        throw std::invalid_argument(
            "scaling_study: quadratic textures need an explicit profile factory");
    return scaling_study(
        [texture, params](Real h) { return StrainProfile::make(texture, params, h); },
        reduce_texture(texture, params), surface, std::move(h_list), quad);
}

}  // namespace npk
