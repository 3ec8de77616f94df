#include "wgstokes/manufactured.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wgs {

ManufacturedCase from_stream_function(const Polynomial& g, const Polynomial& p,
                                      const std::string& name)
{
    if (g.dim() != 2 || p.dim() != 2)
        throw std::invalid_argument("from_stream_function: 2D polynomials required");
    ManufacturedCase c;
    c.name = name;
    c.u1 = g.diff(1);
    c.u2 = -g.diff(0);
    c.p = p - Polynomial::constant(2, integrate_unit_square(p));
    const Polynomial lap_u1 = c.u1.diff(0).diff(0) + c.u1.diff(1).diff(1);
    const Polynomial lap_u2 = c.u2.diff(0).diff(0) + c.u2.diff(1).diff(1);
    c.f1 = -lap_u1 + c.p.diff(0);
    c.f2 = -lap_u2 + c.p.diff(1);
    return c;
}

ManufacturedCase case_s1()
{
    const Polynomial x = Polynomial::monomial(2, 1, 0);
    const Polynomial y = Polynomial::monomial(2, 0, 1);
    const Polynomial bx = x - x * x;
    const Polynomial by = y - y * y;
    const Polynomial g = (bx * bx) * (by * by) * 16.0;
    return from_stream_function(g, g.diff(0).diff(1), "s1");
}

ManufacturedCase case_linear()
{
    const Polynomial x = Polynomial::monomial(2, 1, 0);
    const Polynomial y = Polynomial::monomial(2, 0, 1);
    // stream function with u = (y, x)
    const Polynomial g = (y * y - x * x) * 0.5;
    return from_stream_function(g, x - Polynomial::constant(2, 0.5), "linear");
}

namespace {

Polynomial poly_from_terms(const nlohmann::json& terms)
{
    int deg = 0;
    for (const auto& t : terms) {
        if (!t.is_array() || t.size() != 3)
            throw std::runtime_error("stream coeff file: each term must be [a, b, coeff]");
        deg = std::max(deg, t[0].get<int>() + t[1].get<int>());
    }
    Polynomial p(2, deg);
    for (const auto& t : terms)
        p.set_coeff(t[0].get<int>(), t[1].get<int>(),
                    p.coeff(t[0].get<int>(), t[1].get<int>()) + t[2].get<double>());
    return p;
}

} // namespace

ManufacturedCase named_case(const std::string& name)
{
    if (name == "s1") return case_s1();
    if (name == "linear") return case_linear();
    if (name.rfind("stream:", 0) == 0) {
        const std::string path = name.substr(7);
        std::ifstream in(path);
        if (!in) throw std::runtime_error("named_case: cannot open " + path);
        nlohmann::json j;
        in >> j;
        if (!j.contains("g")) throw std::runtime_error("stream coeff file: missing 'g'");
        const Polynomial g = poly_from_terms(j["g"]);
        const Polynomial p =
            j.contains("p") ? poly_from_terms(j["p"]) : Polynomial::constant(2, 0.0);
        return from_stream_function(g, p, name);
    }
    throw std::invalid_argument("unknown manufactured case '" + name + "'");
}

} // namespace wgs
