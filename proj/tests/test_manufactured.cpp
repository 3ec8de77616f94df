#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "wgstokes/manufactured.hpp"

using wgs::ManufacturedCase;
using wgs::Polynomial;

namespace {

void check_consistency(const ManufacturedCase& mc, double tol = 1e-11)
{
    // divergence-free velocity, coefficient-wise
    Polynomial divu = mc.u1.diff(0) + mc.u2.diff(1);
    CHECK(divu.is_zero(tol));

    // forcing matches -Laplace(u) + grad(p), coefficient-wise
    Polynomial r1 = mc.f1 + mc.u1.diff(0).diff(0) + mc.u1.diff(1).diff(1) - mc.p.diff(0);
    Polynomial r2 = mc.f2 + mc.u2.diff(0).diff(0) + mc.u2.diff(1).diff(1) - mc.p.diff(1);
    CHECK(r1.is_zero(tol));
    CHECK(r2.is_zero(tol));

    // mean-zero pressure over the unit square
    CHECK(std::abs(wgs::integrate_unit_square(mc.p)) < tol);
}

} // namespace

TEST_CASE("stream-function bubble case")
{
    ManufacturedCase mc = wgs::case_s1();
    check_consistency(mc);

    // u vanishes on the whole boundary of the unit square
    for (int i = 0; i <= 20; ++i) {
        const double t = i / 20.0;
        for (auto [x, y] : {std::pair{t, 0.0}, {t, 1.0}, {0.0, t}, {1.0, t}}) {
            CHECK(std::abs(mc.u1.eval(x, y)) < 1e-13);
            CHECK(std::abs(mc.u2.eval(x, y)) < 1e-13);
        }
    }

    // u1 = d/dy [2^4 (x-x^2)^2 (y-y^2)^2] at (1/2, 1/4): 16 * (1/4)^2 * 2*(3/16)*(1/2) = 0.1875
    CHECK(mc.u1.eval(0.5, 0.25) == doctest::Approx(0.1875).epsilon(1e-14));
    CHECK(mc.u2.eval(0.5, 0.25) == doctest::Approx(0.0));
}

TEST_CASE("linear case")
{
    ManufacturedCase mc = wgs::case_linear();
    check_consistency(mc);
    CHECK(mc.u1.eval(0.3, 0.8) == doctest::Approx(0.8));
    CHECK(mc.u2.eval(0.3, 0.8) == doctest::Approx(0.3));
    CHECK(mc.p.eval(0.3, 0.8) == doctest::Approx(0.3 - 0.5));
    // f = -Laplace(u) + grad p = (1, 0)
    CHECK(mc.f1.eval(0.7, 0.1) == doctest::Approx(1.0));
    CHECK(mc.f2.eval(0.7, 0.1) == doctest::Approx(0.0));
}

TEST_CASE("random stream functions always give consistent cases")
{
    std::mt19937 rng(211);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int dg = 2 + static_cast<int>(rng() % 7); // degrees 2..8
        Polynomial g(2, dg), p(2, std::max(1, dg - 1));
        for (int a = 0; a <= dg; ++a)
            for (int b = 0; a + b <= dg; ++b)
                g.set_coeff(a, b, dist(rng));
        for (int a = 0; a <= p.degree(); ++a)
            for (int b = 0; a + b <= p.degree(); ++b)
                p.set_coeff(a, b, dist(rng));
        check_consistency(wgs::from_stream_function(g, p), 1e-10);
    }
}

TEST_CASE("case lookup by name")
{
    CHECK(wgs::named_case("s1").name == "s1");
    CHECK(wgs::named_case("linear").name == "linear");
    CHECK_THROWS(wgs::named_case("nope"));

    const std::string path = "stream_case.json";
    {
        std::ofstream out(path);
        out << R"({"g": [[0, 2, 0.5], [2, 0, -0.5]], "p": [[1, 0, 1.0], [0, 0, -0.5]]})";
    }
    ManufacturedCase mc = wgs::named_case("stream:" + path);
    std::remove(path.c_str());
    // g = (y^2 - x^2)/2  ->  u = (y, x); p = x - 1/2
    check_consistency(mc);
    CHECK(mc.u1.eval(0.2, 0.9) == doctest::Approx(0.9));
    CHECK(mc.u2.eval(0.2, 0.9) == doctest::Approx(0.2));
    CHECK(mc.p.eval(0.25, 0.5) == doctest::Approx(-0.25));
}
