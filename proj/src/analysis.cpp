#include "wgstokes/analysis.hpp"

#include <cmath>

namespace wgs {

VelocityField project_velocity(const Discretization& d, const VectorFn& u, int exact_degree)
{
    const PolyMesh& mesh = *d.mesh;
    const int k = d.k;
    const int mk = poly_space_dim(2, k);
    const int ne_sc = k + 2;
    VelocityField out;
    out.interior = Eigen::VectorXd::Zero(mesh.n_elements() * 2 * mk);
    out.edge = Eigen::VectorXd::Zero(mesh.n_edges() * 2 * ne_sc);

    // Q_0: interior mass solves over the sub-triangulation
    const QuadRule trule = triangle_rule(std::max(2 * k, exact_degree + k) + d.quad_bump);
    Eigen::VectorXd mono;
    for (int el = 0; el < mesh.n_elements(); ++el) {
        const ElementBasis& eb = d.bases[el];
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(mk, mk);
        Eigen::VectorXd rhs1 = Eigen::VectorXd::Zero(mk);
        Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(mk);
        for (int t = 0; t < d.subs[el].n_tri(); ++t) {
            const auto& tri = d.subs[el].triangles[t];
            const QuadRule phys = map_to_triangle(trule, tri[0], tri[1], tri[2]);
            for (int q = 0; q < phys.size(); ++q) {
                const double x = phys.points[q].x, y = phys.points[q].y;
                const double xi = (x - eb.map.ox) / eb.map.scale;
                const double eta = (y - eb.map.oy) / eb.map.scale;
                monomial_values(k, xi, eta, mono);
                const double w = phys.weights[q];
                mass.noalias() += w * mono * mono.transpose();
                const std::array<double, 2> uv = u(x, y);
                rhs1.noalias() += (w * uv[0]) * mono;
                rhs2.noalias() += (w * uv[1]) * mono;
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(mass);
        out.interior.segment(el * 2 * mk, mk) = ldlt.solve(rhs1);
        out.interior.segment(el * 2 * mk + mk, mk) = ldlt.solve(rhs2);
    }

    // Q_b: edge mass solves in the global arclength parameter
    const QuadRule erule =
        edge_rule(std::max(2 * (k + 1), exact_degree + k + 1) + d.quad_bump);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const Pt a = mesh.vertices[mesh.edges[e].v0];
        const Pt b = mesh.vertices[mesh.edges[e].v1];
        Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(ne_sc, ne_sc);
        Eigen::VectorXd rhs1 = Eigen::VectorXd::Zero(ne_sc);
        Eigen::VectorXd rhs2 = Eigen::VectorXd::Zero(ne_sc);
        const QuadRule phys = map_to_segment(erule, a, b);
        Eigen::VectorXd spows(ne_sc);
        for (int q = 0; q < phys.size(); ++q) {
            const double s = erule.points[q].x;
            double sp = 1.0;
            for (int j = 0; j < ne_sc; ++j) {
                spows[j] = sp;
                sp *= s;
            }
            const double w = phys.weights[q];
            mass.noalias() += w * spows * spows.transpose();
            const std::array<double, 2> uv = u(phys.points[q].x, phys.points[q].y);
            rhs1.noalias() += (w * uv[0]) * spows;
            rhs2.noalias() += (w * uv[1]) * spows;
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(mass);
        out.edge.segment(e * 2 * ne_sc, ne_sc) = ldlt.solve(rhs1);
        out.edge.segment(e * 2 * ne_sc + ne_sc, ne_sc) = ldlt.solve(rhs2);
    }
    return out;
}

VelocityField project_velocity(const Discretization& d, const Polynomial& u1,
                               const Polynomial& u2)
{
    const int deg = std::max(u1.degree(), u2.degree());
    return project_velocity(
        d, [&](double x, double y) { return std::array<double, 2>{u1.eval(x, y), u2.eval(x, y)}; },
        deg);
}

Eigen::VectorXd project_pressure(const Discretization& d, const Polynomial& p)
{
    const PolyMesh& mesh = *d.mesh;
    const int k = d.k;
    const int m1 = poly_space_dim(2, k + 1);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh.n_elements() * m1);
    const QuadRule trule = triangle_rule(p.degree() + k + 1 + d.quad_bump);
    Eigen::VectorXd mono;
    for (int el = 0; el < mesh.n_elements(); ++el) {
        const ElementBasis& eb = d.bases[el];
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m1);
        for (int t = 0; t < d.subs[el].n_tri(); ++t) {
            const auto& tri = d.subs[el].triangles[t];
            const QuadRule phys = map_to_triangle(trule, tri[0], tri[1], tri[2]);
            for (int q = 0; q < phys.size(); ++q) {
                const double x = phys.points[q].x, y = phys.points[q].y;
                const double xi = (x - eb.map.ox) / eb.map.scale;
                const double eta = (y - eb.map.oy) / eb.map.scale;
                monomial_values(k + 1, xi, eta, mono);
                rhs.noalias() += (phys.weights[q] * p.eval(x, y)) * mono;
            }
        }
        out.segment(el * m1, m1) =
            Eigen::LDLT<Eigen::MatrixXd>(d.ops[el].pressure_mass).solve(rhs);
    }
    return out;
}

ErrorTriple compute_errors(const Discretization& d, const Solution& sol,
                           const ManufacturedCase& mc)
{
    const PolyMesh& mesh = *d.mesh;
    const int k = d.k;
    const int mk = poly_space_dim(2, k);
    const int m1 = poly_space_dim(2, k + 1);

    const VelocityField qhu = project_velocity(d, mc.u1, mc.u2);

    ErrorTriple err;
    double acc_l2 = 0.0, acc_energy = 0.0, acc_press = 0.0;
    const int err_deg = std::max({2 * (k + 1), mc.p.degree() + k + 1, 2 * mc.p.degree()});
    const QuadRule trule = triangle_rule(err_deg + d.quad_bump);
    Eigen::VectorXd mono, mkv;
    for (int el = 0; el < mesh.n_elements(); ++el) {
        const ElementBasis& eb = d.bases[el];

        // energy: Lambda basis is orthonormal, so the G-coefficients give the norm
        const Eigen::VectorXd diff =
            gather_local(d, el, qhu) - gather_local(d, el, sol.u);
        acc_energy += (d.ops[el].G * diff).squaredNorm();

        // interior velocity L2 and pressure L2 by quadrature
        const auto i0 = qhu.interior.segment(el * 2 * mk, 2 * mk) -
                        sol.u.interior.segment(el * 2 * mk, 2 * mk);
        const auto pc = sol.pressure.segment(el * m1, m1);
        for (int t = 0; t < d.subs[el].n_tri(); ++t) {
            const auto& tri = d.subs[el].triangles[t];
            const QuadRule phys = map_to_triangle(trule, tri[0], tri[1], tri[2]);
            for (int q = 0; q < phys.size(); ++q) {
                const double x = phys.points[q].x, y = phys.points[q].y;
                const double xi = (x - eb.map.ox) / eb.map.scale;
                const double eta = (y - eb.map.oy) / eb.map.scale;
                monomial_values(k, xi, eta, mkv);
                monomial_values(k + 1, xi, eta, mono);
                const double w = phys.weights[q];
                const double ex = mkv.dot(i0.head(mk));
                const double ey = mkv.dot(i0.tail(mk));
                acc_l2 += w * (ex * ex + ey * ey);
                const double ep = mc.p.eval(x, y) - mono.dot(pc);
                acc_press += w * ep * ep;
            }
        }
    }
    err.l2_velocity = std::sqrt(acc_l2);
    err.energy = std::sqrt(acc_energy);
    err.l2_pressure = std::sqrt(acc_press);
    return err;
}

double projected_pressure_error(const Discretization& d, const Solution& sol,
                                const ManufacturedCase& mc)
{
    const Eigen::VectorXd qp = project_pressure(d, mc.p);
    const Eigen::VectorXd diff = qp - sol.pressure;
    const int m1 = poly_space_dim(2, d.k + 1);
    double acc = 0.0;
    for (int el = 0; el < d.mesh->n_elements(); ++el) {
        const auto c = diff.segment(el * m1, m1);
        acc += c.dot(d.ops[el].pressure_mass * c);
    }
    return std::sqrt(acc);
}

void compute_rates(ConvergenceReport& report)
{
    constexpr double exact_tol = 1e-9;
    for (auto& lvl : report.levels)
        lvl.exact = lvl.errors.l2_velocity <= exact_tol && lvl.errors.energy <= exact_tol &&
                    lvl.errors.l2_pressure <= exact_tol;
    for (std::size_t i = 1; i < report.levels.size(); ++i) {
        auto& cur = report.levels[i];
        const auto& prev = report.levels[i - 1];
        if (cur.exact || prev.exact) continue;
        const double lh = std::log(prev.h / cur.h);
        auto rate = [lh](double e0, double e1) -> std::optional<double> {
            constexpr double guard = 1e3 * 2.220446049250313e-16;
            if (e0 <= guard || e1 <= guard) return std::nullopt;
            return std::log(e0 / e1) / lh;
        };
        cur.rate_l2_velocity = rate(prev.errors.l2_velocity, cur.errors.l2_velocity);
        cur.rate_energy = rate(prev.errors.energy, cur.errors.energy);
        cur.rate_l2_pressure = rate(prev.errors.l2_pressure, cur.errors.l2_pressure);
    }
}

} // namespace wgs
