#include <doctest.h>

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "wgstokes/analysis.hpp"
#include "wgstokes/manufactured.hpp"
#include "wgstokes/system.hpp"

using wgs::Discretization;
using wgs::PolyMesh;
using wgs::Polynomial;

TEST_CASE("global DOF counts")
{
    // k = 0 on the 1x1 square grid: 2 interior + 0 interior-edge + 3 pressure
    // + 1 multiplier
    PolyMesh m1 = wgs::gen_square_grid(1);
    wgs::DofMap d1 = wgs::build_dofmap(m1, 0);
    CHECK(d1.n_velocity == 2);
    CHECK(d1.n_pressure == 3);
    CHECK(d1.n_total == 6);

    // k = 0 on the 2x2 grid: 4*2 interior + 4 interior edges * 4 + 4*3 pressure + 1
    PolyMesh m2 = wgs::gen_square_grid(2);
    wgs::DofMap d2 = wgs::build_dofmap(m2, 0);
    CHECK(d2.n_velocity == 8 + 16);
    CHECK(d2.n_pressure == 12);
    CHECK(d2.n_total == 37);

    // boundary edges carry no unknowns
    for (int e = 0; e < m2.n_edges(); ++e)
        CHECK((d2.edge_vel_offset[e] == -1) == m2.edges[e].boundary);
}

TEST_CASE("assembled system is symmetric and deterministic")
{
    PolyMesh m = wgs::gen_polygon_grid(2);
    Discretization d = wgs::discretize(m, 1);
    wgs::ManufacturedCase mc = wgs::case_s1();
    Eigen::VectorXd zero_bc =
        Eigen::VectorXd::Zero(m.n_edges() * d.bases[0].n_edge_dofs());

    wgs::SaddleSystem s1 = wgs::assemble(d, mc.f1, mc.f2, zero_bc);
    wgs::SaddleSystem s2 = wgs::assemble(d, mc.f1, mc.f2, zero_bc);

    Eigen::SparseMatrix<double> diffM = s1.M - s2.M;
    CHECK(diffM.coeffs().cwiseAbs().maxCoeff() == 0.0); // bit-identical assembly
    CHECK((s1.rhs - s2.rhs).cwiseAbs().maxCoeff() == 0.0);

    Eigen::SparseMatrix<double> asym = Eigen::SparseMatrix<double>(s1.M.transpose()) - s1.M;
    double worst = 0.0;
    for (int c = 0; c < asym.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(asym, c); it; ++it)
            worst = std::max(worst, std::abs(it.value()));
    CHECK(worst == 0.0);
}

TEST_CASE("zero forcing with zero boundary data gives the zero solution")
{
    PolyMesh m = wgs::gen_quad_grid(2);
    Discretization d = wgs::discretize(m, 1);
    Polynomial z = Polynomial::constant(2, 0.0);
    Eigen::VectorXd zero_bc =
        Eigen::VectorXd::Zero(m.n_edges() * d.bases[0].n_edge_dofs());
    wgs::SaddleSystem sys = wgs::assemble(d, z, z, zero_bc);
    wgs::Solution sol = wgs::solve(d, sys);
    CHECK(sol.u.interior.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.u.edge.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.pressure.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("linear exact solution is reproduced to roundoff")
{
    wgs::ManufacturedCase mc = wgs::case_linear();
    for (auto gen : {wgs::gen_square_grid, wgs::gen_quad_grid, wgs::gen_polygon_grid}) {
        PolyMesh m = gen(4);
        for (int k : {0, 1}) {
            Discretization d = wgs::discretize(m, k);
            wgs::VelocityField qhu = wgs::project_velocity(d, mc.u1, mc.u2);
            wgs::SaddleSystem sys = wgs::assemble(d, mc.f1, mc.f2, qhu.edge);
            wgs::Solution sol = wgs::solve(d, sys);

            wgs::ErrorTriple err = wgs::compute_errors(d, sol, mc);
            CHECK(err.l2_velocity < 1e-10);
            CHECK(err.energy < 1e-10);
            CHECK(err.l2_pressure < 1e-10);
            CHECK(wgs::divergence_residual(d, sol) < 1e-10);
        }
    }
}

TEST_CASE("discrete solutions are exactly divergence free")
{
    wgs::ManufacturedCase mc = wgs::case_s1();
    PolyMesh m = wgs::gen_polygon_grid(4);
    Discretization d = wgs::discretize(m, 1);
    Eigen::VectorXd zero_bc =
        Eigen::VectorXd::Zero(m.n_edges() * d.bases[0].n_edge_dofs());
    wgs::SaddleSystem sys = wgs::assemble(d, mc.f1, mc.f2, zero_bc);
    wgs::Solution sol = wgs::solve(d, sys);
    double unorm = std::max({1.0, sol.u.interior.norm(), sol.u.edge.norm()});
    CHECK(wgs::divergence_residual(d, sol) < 1e-9 * unorm);
    CHECK(sol.residual < 1e-10);
}

TEST_CASE("inf-sup constant stays bounded away from zero under refinement")
{
    double prev = -1.0;
    for (int n : {2, 4, 8}) {
        PolyMesh m = wgs::gen_square_grid(n);
        const double beta = wgs::infsup_constant(m, 0);
        CHECK(beta > 0.0);
        if (prev > 0.0) CHECK(beta > 0.8 * prev);
        prev = beta;
    }
}

TEST_CASE("solution is invariant under element relabeling")
{
    wgs::ManufacturedCase mc = wgs::case_s1();
    PolyMesh m = wgs::gen_square_grid(2);

    // rebuild the same mesh with elements listed in reverse order
    std::vector<std::vector<int>> relabeled(m.elements.rbegin(), m.elements.rend());
    PolyMesh mr = wgs::build_mesh(m.vertices, relabeled);

    auto solve_errors = [&](const PolyMesh& mesh) {
        Discretization d = wgs::discretize(mesh, 1);
        Eigen::VectorXd zero_bc =
            Eigen::VectorXd::Zero(mesh.n_edges() * d.bases[0].n_edge_dofs());
        wgs::SaddleSystem sys = wgs::assemble(d, mc.f1, mc.f2, zero_bc);
        wgs::Solution sol = wgs::solve(d, sys);
        return wgs::compute_errors(d, sol, mc);
    };
    wgs::ErrorTriple a = solve_errors(m);
    wgs::ErrorTriple b = solve_errors(mr);
    CHECK(a.l2_velocity == doctest::Approx(b.l2_velocity).epsilon(1e-9));
    CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-9));
    CHECK(a.l2_pressure == doctest::Approx(b.l2_pressure).epsilon(1e-9));
}

TEST_CASE("local scatter reproduces the global quadratic form")
{
    // u^T M u over velocity blocks equals the sum of local energies minus the
    // pressure coupling, evaluated on a projected smooth field
    PolyMesh m = wgs::gen_quad_grid(2);
    Discretization d = wgs::discretize(m, 1);
    wgs::ManufacturedCase mc = wgs::case_s1();
    wgs::VelocityField q = wgs::project_velocity(d, mc.u1, mc.u2);

    wgs::DofMap dofs = wgs::build_dofmap(m, 1);
    Eigen::VectorXd xv = Eigen::VectorXd::Zero(dofs.n_total);
    for (int el = 0; el < m.n_elements(); ++el)
        xv.segment(dofs.elem_vel_offset[el], dofs.elem_vel_dofs()) =
            q.interior.segment(el * dofs.elem_vel_dofs(), dofs.elem_vel_dofs());
    for (int e = 0; e < m.n_edges(); ++e)
        if (dofs.edge_vel_offset[e] >= 0)
            xv.segment(dofs.edge_vel_offset[e], dofs.edge_vel_dofs()) =
                q.edge.segment(e * dofs.edge_vel_dofs(), dofs.edge_vel_dofs());

    Eigen::VectorXd zero_bc = Eigen::VectorXd::Zero(m.n_edges() * dofs.edge_vel_dofs());
    wgs::SaddleSystem sys = wgs::assemble(d, mc.f1, mc.f2, zero_bc);
    const double global = xv.dot(sys.M * xv);

    double local_sum = 0.0;
    for (int el = 0; el < m.n_elements(); ++el) {
        Eigen::VectorXd v = wgs::gather_local(d, el, q);
        // zero out boundary-edge dofs to match the eliminated system
        const auto& eb = d.bases[el];
        for (std::size_t le = 0; le < eb.edges.size(); ++le)
            if (m.edges[eb.edges[le].edge_id].boundary)
                v.segment(eb.n_interior_dofs() + le * eb.n_edge_dofs(), eb.n_edge_dofs())
                    .setZero();
        local_sum += v.dot(d.ops[el].A * v);
    }
    CHECK(global == doctest::Approx(local_sum).epsilon(1e-11));
}
