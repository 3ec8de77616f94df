#include "wgstokes/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace wgs {

namespace {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w)
{
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            if (n == 1) { p1 = t; }
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? t : p1;
            const double pn1 = (n == 1) ? 1.0 : p0;
            dp = n * (t * pn - pn1) / (t * t - 1.0);
            const double dt = pn / dp;
            t -= dt;
            if (std::abs(dt) < 1e-16) break;
        }
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

} // namespace

QuadRule edge_rule(int exact_degree)
{
    if (exact_degree < 0) throw std::invalid_argument("edge_rule: negative exactness degree");
    const int n = (exact_degree + 2) / 2; // ceil((deg+1)/2)
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadRule rule;
    rule.exact_degree = exact_degree;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.points[i] = {0.5 * (x[i] + 1.0), 0.0};
        rule.weights[i] = 0.5 * w[i];
    }
    return rule;
}

QuadRule triangle_rule(int exact_degree)
{
    if (exact_degree < 0) throw std::invalid_argument("triangle_rule: negative exactness degree");
    // Duffy map (u, v) -> (u, v(1-u)) adds one power of u to the integrand.
    const int n = (exact_degree + 3) / 2; // exact up to degree+1 in u, degree in v
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadRule rule;
    rule.exact_degree = exact_degree;
    rule.points.reserve(n * n);
    rule.weights.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (x[i] + 1.0);
        const double wu = 0.5 * w[i];
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (x[j] + 1.0);
            const double wv = 0.5 * w[j];
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(wu * wv * (1.0 - u));
        }
    }
    return rule;
}

QuadRule map_to_segment(const QuadRule& rule, const Pt& a, const Pt& b)
{
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len <= 0.0) throw std::invalid_argument("map_to_segment: degenerate segment");
    QuadRule out;
    out.exact_degree = rule.exact_degree;
    out.points.resize(rule.points.size());
    out.weights.resize(rule.weights.size());
    for (int i = 0; i < rule.size(); ++i) {
        const double s = rule.points[i].x;
        out.points[i] = {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)};
        out.weights[i] = rule.weights[i] * len;
    }
    return out;
}

double triangle_area(const Pt& v0, const Pt& v1, const Pt& v2)
{
    return 0.5 * ((v1.x - v0.x) * (v2.y - v0.y) - (v2.x - v0.x) * (v1.y - v0.y));
}

QuadRule map_to_triangle(const QuadRule& rule, const Pt& v0, const Pt& v1, const Pt& v2)
{
    const double jac = 2.0 * triangle_area(v0, v1, v2);
    if (jac <= 0.0) throw std::invalid_argument("map_to_triangle: degenerate or inverted triangle");
    QuadRule out;
    out.exact_degree = rule.exact_degree;
    out.points.resize(rule.points.size());
    out.weights.resize(rule.weights.size());
    for (int i = 0; i < rule.size(); ++i) {
        const double u = rule.points[i].x;
        const double v = rule.points[i].y;
        out.points[i] = {v0.x + u * (v1.x - v0.x) + v * (v2.x - v0.x),
                         v0.y + u * (v1.y - v0.y) + v * (v2.y - v0.y)};
        out.weights[i] = rule.weights[i] * jac;
    }
    return out;
}

} // namespace wgs
