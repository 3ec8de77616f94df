#include "wgstokes/study.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wgs {

void validate(const StudyConfig& config)
{
    if (config.k < 0 || config.k > 4)
        throw std::invalid_argument("StudyConfig: k must be in [0, 4]");
    if (config.level_min > config.level_max)
        throw std::invalid_argument("StudyConfig: empty level range");
    if (config.grid != "square" && config.grid != "quad" && config.grid != "polygon" &&
        config.grid.rfind("file:", 0) != 0)
        throw std::invalid_argument("StudyConfig: unknown grid '" + config.grid + "'");
    if (config.format != "markdown" && config.format != "csv" && config.format != "json")
        throw std::invalid_argument("StudyConfig: unknown format '" + config.format + "'");
    if (config.quad_bump < 0) throw std::invalid_argument("StudyConfig: quad_bump must be >= 0");
}

PolyMesh make_grid(const std::string& grid, int level)
{
    const int n = 1 << level;
    if (grid == "square") return gen_square_grid(n);
    if (grid == "quad") return gen_quad_grid(n);
    if (grid == "polygon") return gen_polygon_grid(n);
    if (grid.rfind("file:", 0) == 0) return load_mesh(grid.substr(5));
    throw std::invalid_argument("make_grid: unknown grid '" + grid + "'");
}

namespace {

// bracket of |||v||| / ||v||_{1,h} over random fields in V_h^0
std::pair<double, double> norm_equivalence_bracket(const Discretization& d, const DofMap& dm,
                                                   int samples)
{
    std::mt19937 rng(20240717u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const PolyMesh& mesh = *d.mesh;
    const int n_int = dm.elem_vel_dofs();
    const int per_edge = dm.edge_vel_dofs();
    double rmin = 1e300, rmax = 0.0;
    for (int s = 0; s < samples; ++s) {
        VelocityField v;
        v.interior.resize(mesh.n_elements() * n_int);
        v.edge = Eigen::VectorXd::Zero(mesh.n_edges() * per_edge);
        for (int i = 0; i < v.interior.size(); ++i) v.interior[i] = gauss(rng);
        for (int e = 0; e < mesh.n_edges(); ++e)
            if (!mesh.edges[e].boundary)
                for (int i = 0; i < per_edge; ++i) v.edge[e * per_edge + i] = gauss(rng);
        double tnorm = 0.0, hnorm = 0.0;
        for (int el = 0; el < mesh.n_elements(); ++el) {
            const Eigen::VectorXd loc = gather_local(d, el, v);
            tnorm += (d.ops[el].G * loc).squaredNorm();
            hnorm += norm_1h_sq_local(mesh, d.subs[el], d.bases[el], loc);
        }
        const double r = std::sqrt(tnorm / hnorm);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    return {rmin, rmax};
}

} // namespace

ConvergenceReport run_study(const StudyConfig& config)
{
    validate(config);
    const ManufacturedCase mc = named_case(config.case_name);
    ConvergenceReport report;
    report.grid = config.grid;
    report.case_name = config.case_name;
    report.k = config.k;

    for (int level = config.level_min; level <= config.level_max; ++level) {
        const auto t0 = std::chrono::steady_clock::now();
        ConvergenceLevel lvl;
        lvl.level = level;
        lvl.n = 1 << level;
        PolyMesh mesh;
        try {
            mesh = make_grid(config.grid, level);
            const Discretization d = discretize(mesh, config.k, config.quad_bump);
            const VelocityField qhu = project_velocity(d, mc.u1, mc.u2);
            const SaddleSystem sys = assemble(d, mc.f1, mc.f2, qhu.edge);
            if (!config.dump_dir.empty()) {
                const std::string base = config.dump_dir + "/level" + std::to_string(level);
                dump_system(sys, base + "_matrix.mtx", base + "_rhs.txt");
            }
            const Solution sol = solve(d, sys, config.solver_tol);
            lvl.h = mesh.h();
            lvl.n_elements = mesh.n_elements();
            lvl.n_dofs = sys.dofs.n_total;
            lvl.errors = compute_errors(d, sol, mc);
            lvl.divergence_residual = divergence_residual(d, sol);
            lvl.solver_residual = sol.residual;
            if (config.diagnostics) {
                const DofMap dm = build_dofmap(mesh, config.k);
                const auto [rmin, rmax] = norm_equivalence_bracket(d, dm, 100);
                lvl.norm_ratio_min = rmin;
                lvl.norm_ratio_max = rmax;
                if (dm.n_total <= 3000) lvl.beta_h = infsup_constant(mesh, config.k);
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("level " + std::to_string(level) + ": " + e.what());
        }
        lvl.time_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
        report.levels.push_back(lvl);
    }
    compute_rates(report);
    return report;
}

namespace {

std::string fmt_sci(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

std::string fmt_rate(const ConvergenceLevel& lvl, const std::optional<double>& r)
{
    if (lvl.exact) return "exact";
    if (!r) return "-";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", *r);
    return buf;
}

} // namespace

std::string emit(const ConvergenceReport& report, const StudyConfig& config,
                 const std::string& format)
{
    std::ostringstream os;
    if (format == "markdown") {
        os << "| Grid | ‖Q_h u − u_h‖₀ | rate "
              "| |||Q_h u − u_h||| | rate | ‖p − p_h‖₀ | rate |\n";
        os << "|---|---|---|---|---|---|---|\n";
        for (const auto& lvl : report.levels) {
            os << "| " << lvl.level << " | " << fmt_sci(lvl.errors.l2_velocity) << " | "
               << fmt_rate(lvl, lvl.rate_l2_velocity) << " | " << fmt_sci(lvl.errors.energy)
               << " | " << fmt_rate(lvl, lvl.rate_energy) << " | "
               << fmt_sci(lvl.errors.l2_pressure) << " | "
               << fmt_rate(lvl, lvl.rate_l2_pressure) << " |\n";
        }
        if (config.diagnostics) {
            os << "\n| Grid | beta_h | ratio min | ratio max |\n|---|---|---|---|\n";
            for (const auto& lvl : report.levels) {
                os << "| " << lvl.level << " | "
                   << (lvl.beta_h ? fmt_sci(*lvl.beta_h) : "-") << " | "
                   << (lvl.norm_ratio_min ? fmt_sci(*lvl.norm_ratio_min) : "-") << " | "
                   << (lvl.norm_ratio_max ? fmt_sci(*lvl.norm_ratio_max) : "-") << " |\n";
            }
        }
        return os.str();
    }
    if (format == "csv") {
        os << "level,n,h,n_elements,n_dofs,err_l2_velocity,rate_l2_velocity,err_energy,"
              "rate_energy,err_l2_pressure,rate_l2_pressure,divergence_residual,time_ms\n";
        for (const auto& lvl : report.levels) {
            os << lvl.level << "," << lvl.n << "," << fmt_sci(lvl.h) << "," << lvl.n_elements
               << "," << lvl.n_dofs << "," << fmt_sci(lvl.errors.l2_velocity) << ","
               << fmt_rate(lvl, lvl.rate_l2_velocity) << "," << fmt_sci(lvl.errors.energy) << ","
               << fmt_rate(lvl, lvl.rate_energy) << "," << fmt_sci(lvl.errors.l2_pressure) << ","
               << fmt_rate(lvl, lvl.rate_l2_pressure) << ","
               << fmt_sci(lvl.divergence_residual) << "," << lvl.time_ms << "\n";
        }
        return os.str();
    }
    if (format == "json") {
        nlohmann::json j;
        j["config"] = {{"k", config.k},
                       {"grid", config.grid},
                       {"levels", {config.level_min, config.level_max}},
                       {"case", config.case_name},
                       {"quad_bump", config.quad_bump},
                       {"solver_tol", config.solver_tol},
                       {"diagnostics", config.diagnostics}};
        j["levels"] = nlohmann::json::array();
        for (const auto& lvl : report.levels) {
            nlohmann::json l;
            l["level"] = lvl.level;
            l["n"] = lvl.n;
            l["h"] = lvl.h;
            l["n_elements"] = lvl.n_elements;
            l["n_dofs"] = lvl.n_dofs;
            l["err_l2_velocity"] = lvl.errors.l2_velocity;
            l["err_energy"] = lvl.errors.energy;
            l["err_l2_pressure"] = lvl.errors.l2_pressure;
            l["divergence_residual"] = lvl.divergence_residual;
            l["solver_residual"] = lvl.solver_residual;
            l["exact"] = lvl.exact;
            auto rate_json = [&](const std::optional<double>& r) {
                return lvl.exact ? nlohmann::json("exact")
                                 : (r ? nlohmann::json(*r) : nlohmann::json(nullptr));
            };
            l["rate_l2_velocity"] = rate_json(lvl.rate_l2_velocity);
            l["rate_energy"] = rate_json(lvl.rate_energy);
            l["rate_l2_pressure"] = rate_json(lvl.rate_l2_pressure);
            if (lvl.beta_h) l["beta_h"] = *lvl.beta_h;
            if (lvl.norm_ratio_min) l["norm_ratio_min"] = *lvl.norm_ratio_min;
            if (lvl.norm_ratio_max) l["norm_ratio_max"] = *lvl.norm_ratio_max;
            l["time_ms"] = lvl.time_ms;
            j["levels"].push_back(l);
        }
        return j.dump(2) + "\n";
    }
    throw std::invalid_argument("emit: unknown format '" + format + "'");
}

} // namespace wgs
