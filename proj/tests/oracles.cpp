#include "oracles.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "wgstokes/local_spaces.hpp"

namespace wgs::test {

using wgs::AffineMap;
using wgs::Polynomial;
using wgs::Pt;

double integrate_triangle_exact(const Polynomial& p, const Pt& v0, const Pt& v1, const Pt& v2)
{
    const std::array<double, 3> xs = {v0.x, v1.x - v0.x, v2.x - v0.x};
    const std::array<double, 3> ys = {v0.y, v1.y - v0.y, v2.y - v0.y};
    const double jac = xs[1] * ys[2] - xs[2] * ys[1];
    return jac * wgs::integrate_unit_triangle(p.compose_linear(xs, ys));
}

double integrate_element_exact(const Polynomial& p, const wgs::PolyMesh& mesh, int element)
{
    const auto sub = wgs::subtriangulate(mesh, element);
    double total = 0.0;
    for (const auto& t : sub.triangles)
        total += integrate_triangle_exact(p, t[0], t[1], t[2]);
    return total;
}

namespace {

// physical-coordinate scaled monomial xi^a eta^b, xi = (x - x_T)/h_T
Polynomial scaled_monomial(const AffineMap& map, int a, int b)
{
    return Polynomial::monomial(2, a, b).compose_affine(map);
}

} // namespace

int lambda_dim_oracle(const wgs::PolyMesh& mesh, int element, int k)
{
    const auto sub = wgs::subtriangulate(mesh, element);
    const AffineMap map{mesh.centroid[element].x, mesh.centroid[element].y,
                        mesh.diameter[element]};

    const int m1 = wgs::poly_space_dim(2, k + 1);
    const int mk = wgs::poly_space_dim(2, k);
    const int n_tri = sub.n_tri();
    const int n_psi = n_tri * 4 * m1; // tensor components row-major: 00, 01, 10, 11
    const int n_cols = n_psi + 2 * mk;

    // physical monomial polynomials shared by all sub-triangles
    std::vector<Polynomial> mono1(m1), monok(mk);
    for (int d = 0, i = 0; d <= k + 1; ++d)
        for (int b = 0; b <= d; ++b, ++i)
            mono1[i] = scaled_monomial(map, d - b, b);
    for (int d = 0, i = 0; d <= k; ++d)
        for (int b = 0; b <= d; ++b, ++i)
            monok[i] = scaled_monomial(map, d - b, b);

    const int n_rows_jump = static_cast<int>(sub.interior.size()) * 2 * (k + 2);
    const int n_rows_div = n_tri * 2 * mk;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_rows_jump + n_rows_div, n_cols);

    auto psi_col = [&](int tri, int comp, int mu) { return tri * 4 * m1 + comp * m1 + mu; };

    // normal-trace continuity of each tensor row across interior sub-edges,
    // tested against s^m for m = 0..k+1
    int row = 0;
    for (const auto& e : sub.interior) {
        const double dx = e.b.x - e.a.x, dy = e.b.y - e.a.y;
        for (int r = 0; r < 2; ++r) {
            for (int m = 0; m <= k + 1; ++m, ++row) {
                for (int mu = 0; mu < m1; ++mu) {
                    Polynomial restr = mono1[mu].restrict_line(e.a.x, dx, e.a.y, dy);
                    Polynomial smono = Polynomial::monomial(1, m);
                    const double val = wgs::integrate_unit_segment(restr * smono);
                    // (tau . n) row r picks components (r,0) and (r,1)
                    C(row, psi_col(e.tri_left, 2 * r + 0, mu)) += e.nx * val;
                    C(row, psi_col(e.tri_left, 2 * r + 1, mu)) += e.ny * val;
                    C(row, psi_col(e.tri_right, 2 * r + 0, mu)) -= e.nx * val;
                    C(row, psi_col(e.tri_right, 2 * r + 1, mu)) -= e.ny * val;
                }
            }
        }
    }

    // row-wise divergence on each piece must match one global [P_k]^2 field q,
    // tested against every P_k monomial per piece
    for (int t = 0; t < n_tri; ++t) {
        const auto& tri = sub.triangles[t];
        for (int r = 0; r < 2; ++r) {
            for (int mu = 0; mu < mk; ++mu, ++row) {
                for (int nu = 0; nu < m1; ++nu) {
                    const double vx =
                        integrate_triangle_exact(mono1[nu].diff(0) * monok[mu], tri[0], tri[1], tri[2]);
                    const double vy =
                        integrate_triangle_exact(mono1[nu].diff(1) * monok[mu], tri[0], tri[1], tri[2]);
                    C(row, psi_col(t, 2 * r + 0, nu)) += vx;
                    C(row, psi_col(t, 2 * r + 1, nu)) += vy;
                }
                for (int nu = 0; nu < mk; ++nu) {
                    const double v =
                        integrate_triangle_exact(monok[nu] * monok[mu], tri[0], tri[1], tri[2]);
                    C(row, n_psi + r * mk + nu) -= v;
                }
            }
        }
    }

    // extended-precision null-space count; (0, q) is never a null vector, so
    // nullity(C) equals the dimension of the constrained tensor space
    using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    LMat Cl = C.cast<long double>();
    Eigen::JacobiSVD<LMat> svd(Cl);
    const auto& sv = svd.singularValues();
    const long double cutoff = sv.size() ? sv(0) * 1e-11L : 0.0L;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    // nullity in the joint (psi, q) variables; a pure-q null vector would need
    // zero moments against all of P_k, so the psi-projection is injective and
    // dim Lambda equals the nullity
    return n_cols - rank;
}

wgs::PolyMesh one_triangle(const Pt& v0, const Pt& v1, const Pt& v2)
{
    return wgs::build_mesh({v0, v1, v2}, {{0, 1, 2}});
}

wgs::PolyMesh one_polygon(const std::vector<Pt>& cycle)
{
    std::vector<int> ids(cycle.size());
    for (std::size_t i = 0; i < cycle.size(); ++i)
        ids[i] = static_cast<int>(i);
    return wgs::build_mesh(cycle, {ids});
}

} // namespace wgs::test
