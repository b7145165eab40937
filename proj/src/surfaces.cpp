#include "npk/surfaces.hpp"

#include "npk/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace npk {

void Domain::validate() const {
    if (!(b1 > a1) || !(b2 > a2))
        throw std::invalid_argument("domain: rectangle must be non-degenerate (a1<b1, a2<b2)");
}

const char* to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::Plane: return "plane";
        case SurfaceKind::CylinderX1: return "cylinder-x1";
        case SurfaceKind::CylinderX2: return "cylinder-x2";
        case SurfaceKind::RotatedCylinder: return "rotated-cylinder";
        case SurfaceKind::Custom: return "custom";
    }
    return "?";
}

IsometrySurface IsometrySurface::plane(const Domain& omega) {
    omega.validate();
    IsometrySurface s;
    s.kind_ = SurfaceKind::Plane;
    s.omega_ = omega;
    s.eval_ = [](Real x1, Real x2) {
        SurfacePoint p;
        p.position = {x1, x2, 0};
        p.tangent.col(0) = Vec3::UnitX();
        p.tangent.col(1) = Vec3::UnitY();
        p.normal = Vec3::UnitZ();
        p.second_form = Sym2::Zero();
        return p;
    };
    return s;
}

IsometrySurface IsometrySurface::cylinder_x1(Real k, const Domain& omega) {
    if (k == 0) return plane(omega);
    omega.validate();
    IsometrySurface s;
    s.kind_ = SurfaceKind::CylinderX1;
    s.k_ = k;
    s.omega_ = omega;
    s.eval_ = [k](Real x1, Real x2) {
        SurfacePoint p;
        const Real c = std::cos(k * x1), sn = std::sin(k * x1);
        p.position = {sn / k, x2, (c - 1) / k};
        p.tangent.col(0) = Vec3(c, 0, -sn);
        p.tangent.col(1) = Vec3::UnitY();
        p.normal = Vec3(sn, 0, c);
        p.second_form = Sym2::Diag(k, 0);
        return p;
    };
    return s;
}

IsometrySurface IsometrySurface::cylinder_x2(Real k, const Domain& omega) {
    if (k == 0) return plane(omega);
    omega.validate();
    IsometrySurface s;
    s.kind_ = SurfaceKind::CylinderX2;
    s.k_ = k;
    s.omega_ = omega;
    s.eval_ = [k](Real x1, Real x2) {
        SurfacePoint p;
        const Real c = std::cos(k * x2), sn = std::sin(k * x2);
        p.position = {x1, sn / k, (c - 1) / k};
        p.tangent.col(0) = Vec3::UnitX();
        p.tangent.col(1) = Vec3(0, c, -sn);
        p.normal = Vec3(0, sn, c);
        p.second_form = Sym2::Diag(0, k);
        return p;
    };
    return s;
}

IsometrySurface IsometrySurface::rotated_cylinder(Real alpha, Real rho, const Domain& omega) {
    if (rho == 0) throw std::invalid_argument("rotated_cylinder: rho must be nonzero");
    omega.validate();
    IsometrySurface s;
    s.kind_ = SurfaceKind::RotatedCylinder;
    s.alpha_ = alpha;
    s.rho_ = rho;
    s.omega_ = omega;
    const Real sa = std::sin(alpha), ca = std::cos(alpha);
    s.eval_ = [rho, sa, ca](Real x1, Real x2) {
        // In-plane rotation (u,v) = R_check (x1,x2); lift through the base
        // cylinder y0(u,v) = (rho sin(u/rho), v, rho cos(u/rho)); rotate back.
        const Real u = sa * x1 - ca * x2;
        const Real v = ca * x1 + sa * x2;
        const Real c = std::cos(u / rho), sn = std::sin(u / rho);

        SurfacePoint p;
        const Vec3 y0(rho * sn, v, rho * c);
        p.position = {sa * y0[0] + ca * y0[1], -ca * y0[0] + sa * y0[1], y0[2]};

        const Vec3 du0(c, 0, -sn);  // d y0 / du
        const Vec3 du(sa * du0[0], -ca * du0[0], du0[2]);  // R_alpha^T du0
        const Vec3 dv(ca, sa, 0);                          // R_alpha^T e2
        p.tangent.col(0) = sa * du + ca * dv;
        p.tangent.col(1) = -ca * du + sa * dv;
        p.normal = p.tangent.col(0).cross(p.tangent.col(1));

        // A = R_check^T diag(1/rho, 0) R_check, constant over the domain.
        p.second_form = Sym2{sa * sa / rho, -sa * ca / rho, ca * ca / rho};
        return p;
    };
    return s;
}

IsometrySurface IsometrySurface::custom(std::function<SurfacePoint(Real, Real)> eval,
                                        const Domain& omega) {
    omega.validate();
    IsometrySurface s;
    s.kind_ = SurfaceKind::Custom;
    s.omega_ = omega;
    s.eval_ = std::move(eval);
    return s;
}

FundamentalForms fundamental_forms_numeric(const IsometrySurface& surface, Real x1, Real x2,
                                           Real step) {
    const Domain& d = surface.domain();
    FundamentalForms out;

    auto position = [&](Real u, Real v) { return surface(u, v).position; };
    // Derivative of an R^3-valued function along coordinate `axis`, one-sided
    // against the domain boundary.
    auto derive = [&](auto&& f, Real u, Real v, int axis, bool& one_sided) -> Vec3 {
        const Real lo = axis == 0 ? d.a1 : d.a2;
        const Real hi = axis == 0 ? d.b1 : d.b2;
        const Real x = axis == 0 ? u : v;
        auto at = [&](Real xs) { return axis == 0 ? f(xs, v) : f(u, xs); };
        if (x - step >= lo && x + step <= hi) return (at(x + step) - at(x - step)) / (2 * step);
        one_sided = true;
        if (x + 2 * step <= hi)  // forward, second order
            return (-3 * at(x) + 4 * at(x + step) - at(x + 2 * step)) / (2 * step);
        return (3 * at(x) - 4 * at(x - step) + at(x - 2 * step)) / (2 * step);
    };

    const Vec3 d1 = derive(position, x1, x2, 0, out.one_sided);
    const Vec3 d2 = derive(position, x1, x2, 1, out.one_sided);
    Mat2 first;
    first << d1.dot(d1), d1.dot(d2), d2.dot(d1), d2.dot(d2);
    out.first = Sym2::from_matrix(first);

    auto unit_normal = [&](Real u, Real v) -> Vec3 {
        bool ignored = false;
        const Vec3 e1 = derive(position, u, v, 0, ignored);
        const Vec3 e2 = derive(position, u, v, 1, ignored);
        return e1.cross(e2).normalized();
    };
    const Vec3 n1 = derive(unit_normal, x1, x2, 0, out.one_sided);
    const Vec3 n2 = derive(unit_normal, x1, x2, 1, out.one_sided);
    Mat2 second;
    second << d1.dot(n1), d1.dot(n2), d2.dot(n1), d2.dot(n2);
    out.second = Sym2::from_matrix(second);
    return out;
}

SurfaceMesh build_mesh(const IsometrySurface& surface, int n1, int n2) {
    if (n1 < 2 || n2 < 2) throw std::invalid_argument("build_mesh: resolution must be >= 2x2");
    const Domain& d = surface.domain();
    SurfaceMesh mesh;
    mesh.n1 = n1;
    mesh.n2 = n2;
    mesh.vertices.reserve(std::size_t(n1) * n2);
    mesh.normals.reserve(std::size_t(n1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i) {
            const Real x1 = d.a1 + d.width() * i / (n1 - 1);
            const Real x2 = d.a2 + d.height() * j / (n2 - 1);
            const SurfacePoint p = surface(x1, x2);
            if (!p.position.allFinite())
                throw NumericalError("build_mesh: non-finite vertex at sampled point");
            mesh.vertices.push_back(p.position);
            mesh.normals.push_back(p.normal);
        }
    mesh.quads.reserve(std::size_t(n1 - 1) * (n2 - 1));
    for (int j = 0; j + 1 < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i) {
            const int v00 = j * n1 + i;
            mesh.quads.push_back({v00, v00 + 1, v00 + 1 + n1, v00 + n1});
        }

    // Degenerate-face guard: every quad must carry area.
    std::vector<Real> areas;
    areas.reserve(mesh.quads.size());
    Real mean = 0;
    for (const auto& q : mesh.quads) {
        const Vec3& a = mesh.vertices[std::size_t(q[0])];
        const Vec3& b = mesh.vertices[std::size_t(q[1])];
        const Vec3& c = mesh.vertices[std::size_t(q[2])];
        const Vec3& e = mesh.vertices[std::size_t(q[3])];
        const Real area = 0.5 * ((b - a).cross(c - a).norm() + (c - a).cross(e - a).norm());
        areas.push_back(area);
        mean += area;
    }
    mean /= Real(mesh.quads.size());
    for (const Real area : areas)
        if (!(area > 1e-14 * mean))
            throw NumericalError("build_mesh: degenerate face in the sampled surface");
    return mesh;
}

std::string export_obj(const SurfaceMesh& mesh) {
    std::string out;
    out.reserve(64 * mesh.vertices.size());
    char line[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(line, sizeof line, "v %.9g %.9g %.9g\n", v[0], v[1], v[2]);
        out += line;
    }
    for (const auto& n : mesh.normals) {
        std::snprintf(line, sizeof line, "vn %.9g %.9g %.9g\n", n[0], n[1], n[2]);
        out += line;
    }
    for (const auto& q : mesh.quads) {
        std::snprintf(line, sizeof line, "f %d//%d %d//%d %d//%d %d//%d\n", q[0] + 1, q[0] + 1,
                      q[1] + 1, q[1] + 1, q[2] + 1, q[2] + 1, q[3] + 1, q[3] + 1);
        out += line;
    }
    return out;
}

std::vector<FundamentalForms> fundamental_forms_numeric(const IsometrySurface& surface, int n1,
                                                        int n2, Real step) {
    if (n1 < 2 || n2 < 2)
        throw std::invalid_argument("fundamental_forms_numeric: grid must be >= 2x2");
    const Domain& d = surface.domain();
    std::vector<FundamentalForms> out;
    out.reserve(std::size_t(n1) * n2);
    for (int j = 0; j < n2; ++j)
        for (int i = 0; i < n1; ++i)
            out.push_back(fundamental_forms_numeric(surface, d.a1 + d.width() * i / (n1 - 1),
                                                    d.a2 + d.height() * j / (n2 - 1), step));
    return out;
}

std::pair<SurfaceMesh, std::string> export_mesh(const IsometrySurface& surface, int n1, int n2) {
    SurfaceMesh mesh = build_mesh(surface, n1, n2);
    std::string obj = export_obj(mesh);
    return {std::move(mesh), std::move(obj)};
}

Real energy_of_surface(const IsometrySurface& surface, const ReducedModel& model,
                       std::optional<Vec3> load, int nx, int ny) {
    const Domain& d = surface.domain();
    const QuadratureRule rx = gauss_legendre(nx, d.a1, d.b1);
    const QuadratureRule ry = gauss_legendre(ny, d.a2, d.b2);
    Real total = 0;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) {
            const SurfacePoint p = surface(rx.nodes[i], ry.nodes[j]);
            Real density = limit_energy_density(p.second_form, model);
            if (load) density -= load->dot(p.position);
            total += rx.weights[i] * ry.weights[j] * density;
        }
    return total;
}

}  // namespace npk
