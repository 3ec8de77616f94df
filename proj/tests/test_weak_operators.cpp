#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "wgstokes/analysis.hpp"
#include "wgstokes/weak_operators.hpp"

using wgs::Discretization;
using wgs::PolyMesh;
using wgs::Polynomial;

namespace {

// local projection DOF vector of a polynomial velocity on one element
Eigen::VectorXd local_projection(const Discretization& d, int element, const Polynomial& u1,
                                 const Polynomial& u2)
{
    wgs::VelocityField q = wgs::project_velocity(d, u1, u2);
    return wgs::gather_local(d, element, q);
}

Polynomial random_poly(int degree, std::mt19937& rng)
{
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Polynomial p(2, degree);
    for (int a = 0; a <= degree; ++a)
        for (int b = 0; a + b <= degree; ++b)
            p.set_coeff(a, b, dist(rng));
    return p;
}

// physical polynomial of scaled pressure monomial mu
Polynomial pressure_monomial(const wgs::ElementBasis& eb, int mu)
{
    for (int d = 0, i = 0;; ++d)
        for (int b = 0; b <= d; ++b, ++i)
            if (i == mu) return Polynomial::monomial(2, d - b, b).compose_affine(eb.map);
}

} // namespace

TEST_CASE("weak gradient of constants vanishes; linear fields are exact")
{
    PolyMesh m = wgs::gen_polygon_grid(2);
    for (int k : {0, 1}) {
        Discretization d = wgs::discretize(m, k);
        for (int e : {0, m.n_elements() / 2}) {
            // constant velocity: weak gradient is zero
            Eigen::VectorXd vc = local_projection(d, e, Polynomial::constant(2, 2.0),
                                                  Polynomial::constant(2, -1.0));
            CHECK((d.ops[e].G * vc).cwiseAbs().maxCoeff() < 1e-11);

            // u = (y, x): weak gradient reproduces the constant tensor [[0,1],[1,0]]
            Eigen::VectorXd vl = local_projection(d, e, Polynomial::monomial(2, 0, 1),
                                                  Polynomial::monomial(2, 1, 0));
            Eigen::VectorXd g = d.ops[e].G * vl;
            const auto& sub = d.subs[e];
            const auto& cen = sub.triangles[0];
            const double x = (cen[0].x + cen[1].x + cen[2].x) / 3;
            const double y = (cen[0].y + cen[1].y + cen[2].y) / 3;
            std::array<double, 4> val = {0, 0, 0, 0};
            for (int i = 0; i < d.lambdas[e].dim; ++i) {
                auto vi = wgs::eval_lambda(d.lambdas[e], d.bases[e], 0, i, x, y);
                for (int c = 0; c < 4; ++c)
                    val[c] += g(i) * vi[c];
            }
            CHECK(val[0] == doctest::Approx(0.0).epsilon(1e-10));
            CHECK(val[1] == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(val[2] == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(val[3] == doctest::Approx(0.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("weak gradient commutes with projection on smooth fields")
{
    // grad_w (Q_h u) equals the constrained-space projection of grad u for any
    // polynomial u of degree k+2
    PolyMesh m = wgs::gen_quad_grid(2);
    std::mt19937 rng(101);
    for (int k : {0, 1}) {
        Discretization d = wgs::discretize(m, k);
        for (int rep = 0; rep < 10; ++rep) {
            Polynomial u1 = random_poly(k + 2, rng);
            Polynomial u2 = random_poly(k + 2, rng);
            std::array<Polynomial, 4> gu = {u1.diff(0), u1.diff(1), u2.diff(0), u2.diff(1)};
            const int e = static_cast<int>(rng() % m.n_elements());

            Eigen::VectorXd v = local_projection(d, e, u1, u2);
            Eigen::VectorXd lhs = d.ops[e].G * v;

            auto tau = [&](int, double x, double y) {
                return std::array<double, 4>{gu[0].eval(x, y), gu[1].eval(x, y),
                                             gu[2].eval(x, y), gu[3].eval(x, y)};
            };
            Eigen::VectorXd rhs =
                wgs::project_onto_lambda(d.lambdas[e], d.bases[e], d.subs[e], tau, k + 1);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
}

TEST_CASE("weak divergence commutes with projection on smooth fields")
{
    PolyMesh m = wgs::gen_polygon_grid(2);
    std::mt19937 rng(103);
    for (int k : {0, 1}) {
        Discretization d = wgs::discretize(m, k);
        for (int rep = 0; rep < 10; ++rep) {
            Polynomial u1 = random_poly(k + 2, rng);
            Polynomial u2 = random_poly(k + 2, rng);
            Polynomial divu = u1.diff(0) + u2.diff(1);
            const int e = static_cast<int>(rng() % m.n_elements());
            const auto& eb = d.bases[e];

            Eigen::VectorXd v = local_projection(d, e, u1, u2);
            // moments (div_w v, w_mu)_T must equal (div u, w_mu)_T exactly
            Eigen::VectorXd lhs = d.ops[e].B * v;
            for (int mu = 0; mu < eb.n_pressure; ++mu) {
                const double exact = wgs::test::integrate_element_exact(
                    divu * pressure_monomial(eb, mu), m, e);
                CHECK(lhs(mu) == doctest::Approx(exact).epsilon(1e-10).scale(1.0));
            }
        }
    }
}

TEST_CASE("stiffness blocks are symmetric positive semidefinite")
{
    PolyMesh m = wgs::gen_polygon_grid(2);
    Discretization d = wgs::discretize(m, 1);
    for (int e = 0; e < m.n_elements(); ++e) {
        const Eigen::MatrixXd& A = d.ops[e].A;
        CHECK((A - A.transpose()).cwiseAbs().maxCoeff() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
        CHECK(es.eigenvalues().minCoeff() > -1e-11);
        // kernel contains exactly the two constant velocity modes
        int null_count = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) < 1e-9 * es.eigenvalues().maxCoeff()) ++null_count;
        CHECK(null_count == 2);
    }
}

TEST_CASE("local energy agrees with direct quadrature of the reconstruction")
{
    PolyMesh m = wgs::gen_quad_grid(2);
    std::mt19937 rng(107);
    Discretization d = wgs::discretize(m, 1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int e : {0, 3}) {
        Eigen::VectorXd v(d.bases[e].n_velocity_dofs());
        for (int i = 0; i < v.size(); ++i)
            v(i) = dist(rng);
        const double energy = v.dot(d.ops[e].A * v);

        // integrate |grad_w v|^2 by quadrature over the sub-triangulation
        Eigen::VectorXd g = d.ops[e].G * v;
        double direct = 0.0;
        for (int t = 0; t < d.subs[e].n_tri(); ++t) {
            auto rule = wgs::map_to_triangle(wgs::triangle_rule(2 * (d.k + 1) + 2),
                                             d.subs[e].triangles[t][0],
                                             d.subs[e].triangles[t][1],
                                             d.subs[e].triangles[t][2]);
            for (int q = 0; q < rule.size(); ++q) {
                std::array<double, 4> val = {0, 0, 0, 0};
                for (int i = 0; i < d.lambdas[e].dim; ++i) {
                    auto vi = wgs::eval_lambda(d.lambdas[e], d.bases[e], t, i,
                                               rule.points[q].x, rule.points[q].y);
                    for (int c = 0; c < 4; ++c)
                        val[c] += g(i) * vi[c];
                }
                direct += rule.weights[q] * (val[0] * val[0] + val[1] * val[1] +
                                             val[2] * val[2] + val[3] * val[3]);
            }
        }
        CHECK(energy == doctest::Approx(direct).epsilon(1e-11));
    }
}

TEST_CASE("energy norm brackets the broken H1 norm uniformly")
{
    // the stabilizer-free construction needs ||v||_1h <= C |||v||| with a
    // mesh-independent constant; sample random fields on two refinement levels
    std::mt19937 rng(109);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    double worst_low = 1e300, worst_high = 0.0;
    for (int n : {2, 4}) {
        PolyMesh m = wgs::gen_polygon_grid(n);
        Discretization d = wgs::discretize(m, 1);
        for (int rep = 0; rep < 20; ++rep) {
            double num = 0.0, den = 0.0;
            for (int e = 0; e < m.n_elements(); ++e) {
                Eigen::VectorXd v(d.bases[e].n_velocity_dofs());
                for (int i = 0; i < v.size(); ++i)
                    v(i) = dist(rng);
                num += v.dot(d.ops[e].A * v);
                den += wgs::norm_1h_sq_local(m, d.subs[e], d.bases[e], v);
            }
            const double ratio = std::sqrt(num / den);
            worst_low = std::min(worst_low, ratio);
            worst_high = std::max(worst_high, ratio);
        }
    }
    CHECK(worst_low > 0.05);
    CHECK(worst_high < 50.0);
}
