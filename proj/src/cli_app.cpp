#include "npk/cli_app.hpp"

#include "npk/compatibility.hpp"
#include "npk/material.hpp"
#include "npk/plate.hpp"
#include "npk/quadrature.hpp"
#include "npk/reduction.hpp"
#include "npk/scaling.hpp"
#include "npk/surfaces.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace npk::cli {

namespace {

using nlohmann::json;

struct RunConfig {
    std::string texture = "splay-bend";
    Real mu = 1, kappa = 2, alpha0 = 2, h0 = 1;
    std::optional<Real> delta0_override;
    Real h = 0.01;
    std::vector<Real> h_list = {1e-2, 5e-3, 2.5e-3, 1e-3};
    std::vector<Real> domain = {0, 1, 0, 1};
    std::vector<int> grid = {16, 16};
    std::string out_dir = ".";
    std::string format = "json";
    unsigned seed = 0;

    // surface descriptor
    std::string surface = "auto";
    Real k = 0.5;
    Real angle = 0;
    Real rho = 1;
    std::vector<int> resolution = {33, 33};

    // quadratic-texture profile
    std::vector<Real> pdiag = {1, 0, 0};
    Real eta0 = 0;
    std::vector<Real> rdiag = {0, 0, 0};

    MaterialParams material() const {
        MaterialParams p{mu, kappa, alpha0, h0};
        if (delta0_override) p.alpha0 = 2 * (*delta0_override) * h0;
        p.validate();
        return p;
    }
    Texture texture_enum() const { return texture_from_string(texture); }
    Domain domain_rect() const {
        if (domain.size() != 4) throw std::invalid_argument("domain must be a1,b1,a2,b2");
        Domain d{domain[0], domain[1], domain[2], domain[3]};
        d.validate();
        return d;
    }
    Mat3 p_matrix() const {
        if (pdiag.size() != 3) throw std::invalid_argument("pdiag must have 3 entries");
        return Vec3(pdiag[0], pdiag[1], pdiag[2]).asDiagonal();
    }
    Mat3 r_matrix() const {
        if (rdiag.size() != 3) throw std::invalid_argument("rdiag must have 3 entries");
        return Vec3(rdiag[0], rdiag[1], rdiag[2]).asDiagonal();
    }
    void validate() const {
        material();
        domain_rect();
        if (!(h > 0)) throw std::invalid_argument("h must be positive");
        for (Real hv : h_list)
            if (!(hv > 0)) throw std::invalid_argument("h-list entries must be positive");
        if (grid.size() != 2 || grid[0] < 2 || grid[1] < 2)
            throw std::invalid_argument("grid must be n1,n2 with n1,n2 >= 2");
        if (resolution.size() != 2 || resolution[0] < 2 || resolution[1] < 2)
            throw std::invalid_argument("resolution must be n1,n2 with n1,n2 >= 2");
        if (format != "json" && format != "csv")
            throw std::invalid_argument("format must be json or csv");
    }
};

json json_sym2(const Sym2& s) { return json::array({s.xx, s.xy, s.yy}); }

json json_model(const ReducedModel& m) {
    return {{"texture", to_string(m.texture)}, {"alpha", m.alpha},
            {"Abar", json_sym2(m.target_curvature)}, {"beta", m.residual},
            {"mu", m.mu}, {"gamma", m.gamma}, {"delta0", m.delta0}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw NumericalError("cannot open output file " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

std::string fmt(Real v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

ReducedModel model_for(const RunConfig& cfg) {
    if (cfg.texture_enum() == Texture::Quadratic)
        return reduce_quadratic(cfg.material(), cfg.p_matrix());
    return reduce_texture(cfg.texture_enum(), cfg.material());
}

/// Surface from the descriptor, or the texture's first energy minimiser
/// when the descriptor is "auto".
IsometrySurface surface_for(const RunConfig& cfg, const ReducedModel& model) {
    const Domain omega = cfg.domain_rect();
    if (cfg.surface == "plane") return IsometrySurface::plane(omega);
    if (cfg.surface == "cylinder-x1") return IsometrySurface::cylinder_x1(cfg.k, omega);
    if (cfg.surface == "cylinder-x2") return IsometrySurface::cylinder_x2(cfg.k, omega);
    if (cfg.surface == "rotated")
        return IsometrySurface::rotated_cylinder(cfg.angle, cfg.rho, omega);
    if (cfg.surface != "auto")
        throw std::invalid_argument("surface must be one of plane, cylinder-x1, cylinder-x2, "
                                    "rotated, auto");
    const MinimiserSet mins = minimise_over_developable(model);
    const Sym2 a = mins.minimisers.front();
    if (std::abs(a.xy) < 1e-12 && std::abs(a.yy) < 1e-12)
        return IsometrySurface::cylinder_x1(a.xx, omega);
    if (std::abs(a.xy) < 1e-12 && std::abs(a.xx) < 1e-12)
        return IsometrySurface::cylinder_x2(a.yy, omega);
    // General rank-one minimiser: realise through the rotated family.
    Eigen::SelfAdjointEigenSolver<Mat2> es(a.matrix());
    const int idx = std::abs(es.eigenvalues()[0]) > std::abs(es.eigenvalues()[1]) ? 0 : 1;
    const Vec2 dir = es.eigenvectors().col(idx);
    return IsometrySurface::rotated_cylinder(std::atan2(dir[1], dir[0]) + pi / 2,
                                             1 / es.eigenvalues()[idx], omega);
}

json json_ricci_report(const RicciReport& report) {
    json samples = json::array();
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        const Mat3& r = report.ricci[i];
        samples.push_back({{"t", report.grid[i]},
                           {"ricci", {r(0, 0), r(0, 1), r(0, 2), r(1, 1), r(1, 2), r(2, 2)}}});
    }
    return {{"samples", samples},
            {"max_abs_ricci", report.max_abs_ricci},
            {"scale", report.scale},
            {"threshold", report.threshold},
            {"verdict", report.verdict == Verdict::Compatible ? "Compatible" : "Incompatible"}};
}

std::string csv_ricci(const RicciReport& report) {
    std::string csv = "t,R11,R12,R13,R22,R23,R33\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i) {
        const Mat3& r = report.ricci[i];
        csv += fmt(report.grid[i]) + "," + fmt(r(0, 0)) + "," + fmt(r(0, 1)) + "," +
               fmt(r(0, 2)) + "," + fmt(r(1, 1)) + "," + fmt(r(1, 2)) + "," + fmt(r(2, 2)) + "\n";
    }
    return csv;
}

int cmd_compat(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    const Texture texture = cfg.texture_enum();
    RicciReport report;
    json extra;
    if (texture == Texture::Quadratic) {
        const Real d0 = cfg.material().delta0();
        QuadraticStrainSpec spec;
        spec.A = d0 * Vec3(cfg.pdiag[0], cfg.pdiag[1], cfg.pdiag[2]);
        spec.Bq = cfg.eta0 * Vec3(cfg.rdiag[0], cfg.rdiag[1], cfg.rdiag[2]);
        spec.h = cfg.h;
        report = ricci(spec.metric());
        extra["classification"] = to_string(classify_quadratic(spec));
    } else {
        const StrainProfile profile = StrainProfile::make(texture, cfg.material(), cfg.h);
        report = ricci(MetricProfile::from_strain_profile(profile));
    }
    json j = json_ricci_report(report);
    j["texture"] = cfg.texture;
    j["h"] = cfg.h;
    for (auto& [key, value] : extra.items()) j[key] = value;
    write_json(out / "ricci_report.json", j);
    write_text(out / "ricci_components.csv", csv_ricci(report));
    std::cout << "compat: verdict "
              << (report.verdict == Verdict::Compatible ? "Compatible" : "Incompatible")
              << ", max |R_ij| = " << fmt(report.max_abs_ricci) << "\n";
    return 0;
}

int cmd_reduce(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    const ReducedModel model = model_for(cfg);
    write_json(out / "reduced_model.json", json_model(model));
    const Texture texture = cfg.texture_enum();
    if (texture == Texture::SplayBend || texture == Texture::Twisted) {
        const MomentTable table = moment_integrals(texture);
        std::string csv = "integral,value\n";
        csv += "int_Mcheck_xx," + fmt(table.int_m_check.xx) + "\n";
        csv += "int_Mcheck_xy," + fmt(table.int_m_check.xy) + "\n";
        csv += "int_Mcheck_yy," + fmt(table.int_m_check.yy) + "\n";
        csv += "int_t_Mcheck_xx," + fmt(table.int_t_m_check.xx) + "\n";
        csv += "int_t_Mcheck_xy," + fmt(table.int_t_m_check.xy) + "\n";
        csv += "int_t_Mcheck_yy," + fmt(table.int_t_m_check.yy) + "\n";
        csv += "int_Mcheck_sq," + fmt(table.int_m_check_sq) + "\n";
        csv += "int_t_tr_Mcheck," + fmt(table.int_t_tr_m_check) + "\n";
        csv += "int_cos2," + fmt(table.int_cos2) + "\n";
        csv += "int_sin2f," + fmt(table.int_sin_2f) + "\n";
        csv += "int_t_cos2," + fmt(table.int_t_cos2) + "\n";
        csv += "int_t_sin2f," + fmt(table.int_t_sin_2f) + "\n";
        write_text(out / "moment_integrals.csv", csv);
    }
    std::cout << "reduce: alpha = " << fmt(model.alpha) << ", Abar = ["
              << fmt(model.target_curvature.xx) << ", " << fmt(model.target_curvature.xy) << ", "
              << fmt(model.target_curvature.yy) << "], beta = " << fmt(model.residual) << "\n";
    return 0;
}

json json_minimisers(const MinimiserSet& mins, Real area) {
    json list = json::array();
    for (const auto& a : mins.minimisers) list.push_back(json_sym2(a));
    json j{{"multiplicity", to_string(mins.multiplicity)},
           {"energy_per_area", mins.energy_per_area},
           {"energy_total", mins.energy_per_area * area},
           {"minimisers", list}};
    if (mins.multiplicity == Multiplicity::ContinuousFamily)
        j["family_curvature"] = mins.family_curvature;
    return j;
}

int cmd_minimise(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    const ReducedModel model = model_for(cfg);
    const MinimiserSet mins = minimise_over_developable(model);
    write_json(out / "minimiser_set.json", json_minimisers(mins, cfg.domain_rect().area()));
    std::cout << "minimise: " << to_string(mins.multiplicity) << ", energy per unit area "
              << fmt(mins.energy_per_area) << "\n";
    return 0;
}

int cmd_surface(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    const ReducedModel model = model_for(cfg);
    const IsometrySurface surf = surface_for(cfg, model);
    const SurfaceMesh mesh = build_mesh(surf, cfg.resolution[0], cfg.resolution[1]);
    write_text(out / "surface.obj", export_obj(mesh));
    const Sym2 a = surf(surf.domain().a1, surf.domain().a2).second_form;
    json j{{"kind", to_string(surf.kind())},
           {"A_y", json_sym2(a)},
           {"domain", {surf.domain().a1, surf.domain().b1, surf.domain().a2, surf.domain().b2}},
           {"energy", energy_of_surface(surf, model)},
           {"vertices", mesh.vertices.size()},
           {"quads", mesh.quads.size()}};
    if (surf.kind() == SurfaceKind::CylinderX1 || surf.kind() == SurfaceKind::CylinderX2)
        j["k"] = surf.curvature();
    if (surf.kind() == SurfaceKind::RotatedCylinder) {
        j["alpha"] = surf.rotation_angle();
        j["rho"] = surf.radius();
    }
    write_json(out / "surface_summary.json", j);
    std::cout << "surface: " << to_string(surf.kind()) << ", energy = "
              << fmt(energy_of_surface(surf, model)) << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    const ReducedModel model = model_for(cfg);
    const Real area = cfg.domain_rect().area();

    const MinimiserSet mins = minimise_over_developable(model);
    Real kscale = 0;
    for (const auto& a : mins.minimisers)
        kscale = std::max({kscale, std::abs(a.xx), std::abs(a.yy)});
    kscale = std::max(kscale, model.target_curvature.norm());

    std::string csv = "k,energy_cylinder_x1,energy_cylinder_x2\n";
    const int n = 201;
    for (int i = 0; i < n; ++i) {
        const Real k = -2 * kscale + 4 * kscale * i / (n - 1);
        const Real e1 = area * limit_energy_density(Sym2::Diag(k, 0), model);
        const Real e2 = area * limit_energy_density(Sym2::Diag(0, k), model);
        csv += fmt(k) + "," + fmt(e1) + "," + fmt(e2) + "\n";
    }
    write_text(out / "sweep_cylinder.csv", csv);

    if (mins.multiplicity == Multiplicity::ContinuousFamily) {
        const Real kbar = mins.family_curvature;
        std::string family = "s,energy_plus,energy_minus\n";
        const int m = 41;
        for (int i = 0; i < m; ++i) {
            const Real s = -std::abs(kbar) / 2 + std::abs(kbar) * i / (m - 1);
            const auto [ap, am] = zero_stiffness_family(model, s);
            family += fmt(s) + "," + fmt(area * limit_energy_density(ap, model)) + "," +
                      fmt(area * limit_energy_density(am, model)) + "\n";
        }
        write_text(out / "sweep_family.csv", family);
    }
    std::cout << "sweep: wrote energy landscapes for texture " << cfg.texture << "\n";
    return 0;
}

json json_scaling(const ScalingReport& report) {
    json pairs = json::array();
    for (std::size_t i = 0; i < report.h_values.size(); ++i)
        pairs.push_back({{"h", report.h_values[i]}, {"E_over_h2", report.rescaled_energies[i]}});
    return {{"sweep", pairs},
            {"extrapolated_limit", report.extrapolated_limit},
            {"gap_exponent", report.gap_exponent},
            {"raw_energy_exponent", report.raw_energy_exponent},
            {"reference_elim", report.reference_elim},
            {"monotone", report.monotone}};
}

int cmd_gamma_check(const RunConfig& cfg) {
    const auto out = std::filesystem::path(cfg.out_dir);
    if (cfg.h_list.size() < 3) throw std::invalid_argument("h-list needs at least 3 values");
    const ReducedModel model = model_for(cfg);
    const IsometrySurface surf = surface_for(cfg, model);
    const GammaQuadrature quad{cfg.grid[0], cfg.grid[1], 16};
    const MaterialParams material = cfg.material();
    const ProfileFactory profile_at =
        cfg.texture_enum() == Texture::Quadratic
            ? ProfileFactory([material, P = cfg.p_matrix(), eta0 = cfg.eta0,
                              R = cfg.r_matrix()](Real h) {
                  return StrainProfile::quadratic(material, h, P, eta0, R);
              })
            : ProfileFactory([material, tex = cfg.texture_enum()](Real h) {
                  return StrainProfile::make(tex, material, h);
              });
    const ScalingReport report = scaling_study(profile_at, model, surf, cfg.h_list, quad);
    write_json(out / "scaling_report.json", json_scaling(report));
    std::string csv = "h,E_over_h2,gap\n";
    for (std::size_t i = 0; i < report.h_values.size(); ++i)
        csv += fmt(report.h_values[i]) + "," + fmt(report.rescaled_energies[i]) + "," +
               fmt(std::abs(report.rescaled_energies[i] - report.reference_elim)) + "\n";
    write_text(out / "scaling_data.csv", csv);
    std::cout << "gamma-check: extrapolated " << fmt(report.extrapolated_limit) << " vs limit "
              << fmt(report.reference_elim) << " (raw exponent "
              << fmt(report.raw_energy_exponent) << ")\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    cmd_compat(cfg);
    cmd_reduce(cfg);
    cmd_minimise(cfg);
    cmd_surface(cfg);
    cmd_sweep(cfg);
    cmd_gamma_check(cfg);

    // Chain self-check: the generated minimiser surface reproduces the
    // minimal energy computed on curvature tensors.
    const ReducedModel model = model_for(cfg);
    const MinimiserSet mins = minimise_over_developable(model);
    const IsometrySurface surf = surface_for(cfg, model);
    const Real area = cfg.domain_rect().area();
    const Real surface_energy = energy_of_surface(surf, model);
    const Real direct = mins.energy_per_area * area;
    const Real rel = std::abs(surface_energy - direct) / std::max(std::abs(direct), Real(1e-300));
    std::cout << "report: texture " << cfg.texture << "\n"
              << "  alpha  = " << fmt(model.alpha) << "\n"
              << "  Abar   = [" << fmt(model.target_curvature.xx) << ", "
              << fmt(model.target_curvature.xy) << ", " << fmt(model.target_curvature.yy)
              << "]\n"
              << "  beta   = " << fmt(model.residual) << "\n"
              << "  min E  = " << fmt(direct) << " (" << to_string(mins.multiplicity) << ")\n"
              << "  chain  = " << fmt(surface_energy) << " (rel. gap " << fmt(rel) << ")\n";
    if (rel > 1e-9) throw NumericalError("report: reduce/minimise/surface chain inconsistent");
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{
        "npk - plate models for thin nematic elastomer sheets.\n"
        "Computes spontaneous-strain profiles, kinematic compatibility (Ricci),\n"
        "reduced bending models (alpha, Abar, beta), constrained curvature\n"
        "minimisers, minimal-energy surfaces, and thin-film energy scalings.\n"
        "Unit convention: lengths in units of h0, energies in units of mu; all\n"
        "derived constants then depend only on (gamma, delta0, h).\n"
        "Environment: NPK_THREADS caps internal parallelism."};
    app.set_help_flag("--help", "print usage");  // frees -h for the thickness flag
    app.set_config("--config", "", "TOML configuration file (flags override it)");

    RunConfig cfg;
    app.add_option("--texture", cfg.texture,
                   "texture: splay-bend | twisted | constant-normal | quadratic");
    app.add_option("--mu", cfg.mu, "shear modulus");
    app.add_option("--kappa", cfg.kappa, "volumetric stiffness W_vol''(1)");
    app.add_option("--alpha0", cfg.alpha0, "nematic magnitude parameter");
    app.add_option("--h0", cfg.h0, "reference length");
    Real delta0_flag = 0;
    auto* delta0_opt = app.add_option("--delta0", delta0_flag,
                                      "set delta0 = alpha0/(2 h0) directly (overrides alpha0)");
    app.add_option("--h", cfg.h, "physical thickness");
    app.add_option("--h-list", cfg.h_list, "thickness sweep values")->delimiter(',');
    app.add_option("--domain", cfg.domain, "midplane rectangle a1,b1,a2,b2")
        ->delimiter(',')
        ->expected(4);
    app.add_option("--grid", cfg.grid, "evaluation grid n1,n2")->delimiter(',')->expected(2);
    app.add_option("--out", cfg.out_dir, "output directory");
    app.add_option("--format", cfg.format, "primary output format: json | csv");
    app.add_option("--seed", cfg.seed, "seed recorded for randomised consumers");
    app.add_option("--surface", cfg.surface,
                   "surface descriptor: auto | plane | cylinder-x1 | cylinder-x2 | rotated");
    app.add_option("--k", cfg.k, "cylinder curvature");
    app.add_option("--angle", cfg.angle, "rotated-cylinder angle alpha");
    app.add_option("--rho", cfg.rho, "rotated-cylinder signed radius");
    app.add_option("--resolution", cfg.resolution, "mesh resolution n1,n2")
        ->delimiter(',')
        ->expected(2);
    app.add_option("--pdiag", cfg.pdiag, "quadratic texture: diagonal of P")
        ->delimiter(',')
        ->expected(3);
    app.add_option("--eta0", cfg.eta0, "quadratic texture: quadratic coefficient scale");
    app.add_option("--rdiag", cfg.rdiag, "quadratic texture: diagonal of R")
        ->delimiter(',')
        ->expected(3);

    app.require_subcommand(1);
    auto* sub_compat = app.add_subcommand("compat", "Ricci compatibility report");
    auto* sub_reduce = app.add_subcommand("reduce", "reduced bending model (alpha, Abar, beta)");
    auto* sub_minimise = app.add_subcommand("minimise", "minimise over developable curvatures");
    auto* sub_surface = app.add_subcommand("surface", "generate a minimal-energy surface (OBJ)");
    auto* sub_sweep = app.add_subcommand("sweep", "energy landscape CSVs");
    auto* sub_gamma = app.add_subcommand("gamma-check", "thin-film energy scaling study");
    auto* sub_report = app.add_subcommand("report", "one-shot report for a texture");
    for (auto* sub : {sub_compat, sub_reduce, sub_minimise, sub_surface, sub_sweep, sub_gamma,
                      sub_report})
        sub->fallthrough();  // global flags may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (*delta0_opt) {
            if (!(delta0_flag > 0)) throw std::invalid_argument("delta0 must be positive");
            cfg.delta0_override = delta0_flag;
        }
        cfg.validate();
        std::filesystem::create_directories(cfg.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sub_compat->parsed()) return cmd_compat(cfg);
        if (sub_reduce->parsed()) return cmd_reduce(cfg);
        if (sub_minimise->parsed()) return cmd_minimise(cfg);
        if (sub_surface->parsed()) return cmd_surface(cfg);
        if (sub_sweep->parsed()) return cmd_sweep(cfg);
        if (sub_gamma->parsed()) return cmd_gamma_check(cfg);
        if (sub_report->parsed()) return cmd_report(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(int(argv.size()), argv.data());
}

}  // namespace npk::cli
