#include "wgstokes/system.hpp"

#include <fstream>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace wgs {

DofMap build_dofmap(const PolyMesh& mesh, int k)
{
    DofMap dm;
    dm.k = k;
    dm.n_int_scalar = poly_space_dim(2, k);
    dm.n_edge_scalar = k + 2;
    int next = 0;
    dm.elem_vel_offset.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        dm.elem_vel_offset[e] = next;
        next += dm.elem_vel_dofs();
    }
    dm.edge_vel_offset.assign(mesh.n_edges(), -1);
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (!mesh.edges[e].boundary) {
            dm.edge_vel_offset[e] = next;
            next += dm.edge_vel_dofs();
        }
    dm.n_velocity = next;
    dm.elem_p_offset.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        dm.elem_p_offset[e] = next;
        next += poly_space_dim(2, k + 1);
    }
    dm.n_pressure = next - dm.n_velocity;
    dm.multiplier = next;
    dm.n_total = next + 1;
    return dm;
}

namespace {

// Global index of local velocity DOF j on element e, or -1 when it lives on a
// boundary edge (eliminated).
int global_vel_index(const PolyMesh& mesh, const DofMap& dm, const ElementBasis& eb, int element,
                     int j)
{
    const int n_int = eb.n_interior_dofs();
    if (j < n_int) return dm.elem_vel_offset[element] + j;
    const int per_edge = dm.edge_vel_dofs();
    const int loc_edge = (j - n_int) / per_edge;
    const int within = (j - n_int) % per_edge;
    const int edge_id = eb.edges[loc_edge].edge_id;
    if (dm.edge_vel_offset[edge_id] < 0) return -1;
    return dm.edge_vel_offset[edge_id] + within;
}

int boundary_value_index(const DofMap& dm, const ElementBasis& eb, int j)
{
    const int n_int = eb.n_interior_dofs();
    const int per_edge = dm.edge_vel_dofs();
    const int loc_edge = (j - n_int) / per_edge;
    const int within = (j - n_int) % per_edge;
    return eb.edges[loc_edge].edge_id * per_edge + within;
}

} // namespace

Eigen::VectorXd gather_local(const Discretization& d, int element, const VelocityField& v)
{
    const ElementBasis& eb = d.bases[element];
    const int n_int = eb.n_interior_dofs();
    const int per_edge = eb.n_edge_dofs();
    Eigen::VectorXd out(eb.n_velocity_dofs());
    out.head(n_int) = v.interior.segment(element * n_int, n_int);
    for (std::size_t e = 0; e < eb.edges.size(); ++e)
        out.segment(n_int + static_cast<int>(e) * per_edge, per_edge) =
            v.edge.segment(eb.edges[e].edge_id * per_edge, per_edge);
    return out;
}

SaddleSystem assemble(const Discretization& d, const Polynomial& f1, const Polynomial& f2,
                      const Eigen::VectorXd& boundary_values)
{
    const PolyMesh& mesh = *d.mesh;
    SaddleSystem sys;
    sys.dofs = build_dofmap(mesh, d.k);
    const DofMap& dm = sys.dofs;
    sys.boundary_values = boundary_values;
    if (boundary_values.size() != mesh.n_edges() * dm.edge_vel_dofs())
        throw std::invalid_argument("assemble: boundary value vector has wrong size");

    std::vector<Eigen::Triplet<double>> trips;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dm.n_total);

    const int load_deg = std::max(f1.degree(), f2.degree()) + d.k + 1 + d.quad_bump;
    const QuadRule trule = triangle_rule(load_deg);

    for (int el = 0; el < mesh.n_elements(); ++el) {
        const ElementBasis& eb = d.bases[el];
        const LocalOperators& ops = d.ops[el];
        const int n_vel = eb.n_velocity_dofs();
        const int m1 = eb.n_pressure;

        std::vector<int> gidx(n_vel);
        for (int j = 0; j < n_vel; ++j) gidx[j] = global_vel_index(mesh, dm, eb, el, j);

        // A block and -B^T / -B blocks; boundary columns fold into the rhs
        for (int j = 0; j < n_vel; ++j) {
            if (gidx[j] >= 0) {
                for (int i = 0; i < n_vel; ++i) {
                    if (gidx[i] < 0) continue;
                    const double a = ops.A(i, j);
                    if (a != 0.0) trips.emplace_back(gidx[i], gidx[j], a);
                }
                for (int i = 0; i < m1; ++i) {
                    const double b = ops.B(i, j);
                    if (b != 0.0) {
                        trips.emplace_back(gidx[j], dm.elem_p_offset[el] + i - 0, -b);
                        trips.emplace_back(dm.elem_p_offset[el] + i, gidx[j], -b);
                    }
                }
            } else {
                const double g = boundary_values[boundary_value_index(dm, eb, j)];
                if (g == 0.0) continue;
                for (int i = 0; i < n_vel; ++i)
                    if (gidx[i] >= 0) rhs[gidx[i]] -= ops.A(i, j) * g;
                for (int i = 0; i < m1; ++i)
                    rhs[dm.elem_p_offset[el] + i] += ops.B(i, j) * g;
            }
        }

        // pressure-mean column/row
        for (int i = 0; i < m1; ++i) {
            const double mv = ops.pressure_moments[i];
            trips.emplace_back(dm.elem_p_offset[el] + i, dm.multiplier, mv);
            trips.emplace_back(dm.multiplier, dm.elem_p_offset[el] + i, mv);
        }

        // load vector on interior DOFs: (f, phi_0)_T
        const int mk = eb.n_scalar_interior;
        Eigen::VectorXd mono;
        for (int t = 0; t < d.subs[el].n_tri(); ++t) {
            const auto& tri = d.subs[el].triangles[t];
            const QuadRule phys = map_to_triangle(trule, tri[0], tri[1], tri[2]);
            for (int q = 0; q < phys.size(); ++q) {
                const double x = phys.points[q].x, y = phys.points[q].y;
                const double xi = (x - eb.map.ox) / eb.map.scale;
                const double eta = (y - eb.map.oy) / eb.map.scale;
                monomial_values(d.k, xi, eta, mono);
                const double w = phys.weights[q];
                const double fv1 = f1.eval(x, y), fv2 = f2.eval(x, y);
                for (int mu = 0; mu < mk; ++mu) {
                    rhs[dm.elem_vel_offset[el] + 0 * mk + mu] += w * fv1 * mono[mu];
                    rhs[dm.elem_vel_offset[el] + 1 * mk + mu] += w * fv2 * mono[mu];
                }
            }
        }
    }

    sys.M.resize(dm.n_total, dm.n_total);
    sys.M.setFromTriplets(trips.begin(), trips.end());
    sys.M.makeCompressed();
    sys.rhs = rhs;
    return sys;
}

Solution solve(const Discretization& d, const SaddleSystem& sys, double tol)
{
    const PolyMesh& mesh = *d.mesh;
    const DofMap& dm = sys.dofs;

    Eigen::VectorXd x;
    const double bnorm = sys.rhs.norm();
    if (bnorm == 0.0) {
        x = Eigen::VectorXd::Zero(dm.n_total);
    } else {
        // The pressure-mean multiplier couples to every pressure DOF; that one
        // dense row wrecks the fill-reducing ordering. Factor the reduced system
        // instead: drop the multiplier and pin one pressure coefficient, then
        // shift the pressure back to zero mean. The shift spans exactly the
        // kernel of the reduced saddle matrix, so u is unchanged.
        const int n = dm.n_total - 1;
        const int pin = dm.elem_p_offset[0];
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(sys.M.nonZeros()));
        for (int c = 0; c < n; ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(sys.M, c); it; ++it)
                if (it.row() < n && it.row() != pin && it.col() != pin)
                    trips.emplace_back(static_cast<int>(it.row()), c, it.value());
        trips.emplace_back(pin, pin, 1.0);
        Eigen::SparseMatrix<double> Mr(n, n);
        Mr.setFromTriplets(trips.begin(), trips.end());
        Eigen::VectorXd rhs_r = sys.rhs.head(n);
        rhs_r(pin) = 0.0;

        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(Mr);
        if (lu.info() != Eigen::Success)
            throw std::runtime_error("solve: sparse LU factorization failed");
        x = Eigen::VectorXd::Zero(dm.n_total);
        x.head(n) = lu.solve(rhs_r);

        // zero-mean pressure: subtract the constant whose coefficient vector is
        // e_0 per element (the constant monomial), weighted by element areas
        double mass = 0.0, mean = 0.0;
        const int m1p = poly_space_dim(2, dm.k + 1);
        for (int e = 0; e < mesh.n_elements(); ++e) {
            const Eigen::VectorXd& mom = d.ops[e].pressure_moments;
            mass += mom(0); // integral of the constant basis function = |T|
            mean += mom.dot(x.segment(dm.elem_p_offset[e], m1p));
        }
        const double shift = mean / mass;
        for (int e = 0; e < mesh.n_elements(); ++e)
            x(dm.elem_p_offset[e]) -= shift;
        x(dm.multiplier) = 0.0;
    }

    Solution sol;
    sol.residual = (sys.M * x - sys.rhs).norm() / (bnorm > 0.0 ? bnorm : 1.0);
    const double limit = (bnorm > 0.0) ? tol : 1e-12;
    if (sol.residual > limit)
        throw std::runtime_error("solve: residual contract unmet, ||Mx-b||/||b|| = " +
                                 std::to_string(sol.residual));

    const int n_int = dm.elem_vel_dofs();
    const int per_edge = dm.edge_vel_dofs();
    const int m1 = poly_space_dim(2, dm.k + 1);
    sol.u.interior.resize(mesh.n_elements() * n_int);
    sol.u.edge = sys.boundary_values; // boundary edges keep the lift
    sol.pressure.resize(mesh.n_elements() * m1);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        sol.u.interior.segment(e * n_int, n_int) = x.segment(dm.elem_vel_offset[e], n_int);
        sol.pressure.segment(e * m1, m1) = x.segment(dm.elem_p_offset[e], m1);
    }
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (dm.edge_vel_offset[e] >= 0)
            sol.u.edge.segment(e * per_edge, per_edge) =
                x.segment(dm.edge_vel_offset[e], per_edge);
    sol.multiplier = x[dm.multiplier];
    return sol;
}

double divergence_residual(const Discretization& d, const Solution& sol)
{
    double acc = 0.0;
    for (int e = 0; e < d.mesh->n_elements(); ++e) {
        const Eigen::VectorXd v = gather_local(d, e, sol.u);
        acc += (d.ops[e].B * v).squaredNorm();
    }
    return std::sqrt(acc);
}

double infsup_constant(const PolyMesh& mesh, int k, int max_dofs)
{
    const Discretization d = discretize(mesh, k);
    const DofMap dm = build_dofmap(mesh, k);
    if (dm.n_total > max_dofs)
        throw std::runtime_error("infsup_constant: system too large for dense analysis (" +
                                 std::to_string(dm.n_total) + " DOFs)");
    const int nv = dm.n_velocity;
    const int np = dm.n_pressure;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nv, nv);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(np, nv);
    Eigen::MatrixXd Mp = Eigen::MatrixXd::Zero(np, np);
    Eigen::VectorXd mvec = Eigen::VectorXd::Zero(np);

    for (int el = 0; el < mesh.n_elements(); ++el) {
        const ElementBasis& eb = d.bases[el];
        const LocalOperators& ops = d.ops[el];
        const int n_vel = eb.n_velocity_dofs();
        const int m1 = eb.n_pressure;
        std::vector<int> gidx(n_vel);
        for (int j = 0; j < n_vel; ++j) gidx[j] = global_vel_index(mesh, dm, eb, el, j);
        const int poff = dm.elem_p_offset[el] - dm.n_velocity;
        for (int j = 0; j < n_vel; ++j) {
            if (gidx[j] < 0) continue;
            for (int i = 0; i < n_vel; ++i)
                if (gidx[i] >= 0) A(gidx[i], gidx[j]) += ops.A(i, j);
            for (int i = 0; i < m1; ++i) B(poff + i, gidx[j]) += ops.B(i, j);
        }
        Mp.block(poff, poff, m1, m1) = ops.pressure_mass;
        mvec.segment(poff, m1) = ops.pressure_moments;
    }

    // A is SPD on V_h^0 by the norm equivalence; S = B A^{-1} B^T
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    const Eigen::MatrixXd S = B * ldlt.solve(B.transpose());

    // restrict to mean-zero pressures: nullspace basis of m^T via Householder QR
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mvec);
    const Eigen::MatrixXd Q = qr.householderQ();
    const Eigen::MatrixXd Z = Q.rightCols(np - 1);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
        Z.transpose() * S * Z, Z.transpose() * Mp * Z);
    const double lam_min = ges.eigenvalues()[0];
    if (lam_min < 0.0 && lam_min > -1e-12) return 0.0;
    return std::sqrt(lam_min);
}

void dump_system(const SaddleSystem& sys, const std::string& matrix_path,
                 const std::string& rhs_path)
{
    std::ofstream mm(matrix_path);
    if (!mm) throw std::runtime_error("dump_system: cannot write " + matrix_path);
    mm << "%%MatrixMarket matrix coordinate real general\n";
    mm << sys.M.rows() << " " << sys.M.cols() << " " << sys.M.nonZeros() << "\n";
    mm.precision(17);
    for (int c = 0; c < sys.M.outerSize(); ++c)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.M, c); it; ++it)
            mm << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    std::ofstream rf(rhs_path);
    if (!rf) throw std::runtime_error("dump_system: cannot write " + rhs_path);
    rf.precision(17);
    for (int i = 0; i < sys.rhs.size(); ++i) rf << sys.rhs[i] << "\n";
}

} // namespace wgs
