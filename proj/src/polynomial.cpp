#include "wgstokes/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace wgs {

int poly_space_dim(int dim, int degree)
{
    if (degree < 0) return 0;
    if (dim == 1) return degree + 1;
    if (dim == 2) return (degree + 1) * (degree + 2) / 2;
    throw std::invalid_argument("poly_space_dim: dim must be 1 or 2");
}

Polynomial::Polynomial(int dim, int degree) : dim_(dim), degree_(degree)
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("Polynomial: dim must be 1 or 2");
    if (degree < 0) throw std::invalid_argument("Polynomial: negative degree");
    coeffs_.assign(poly_space_dim(dim, degree), 0.0);
}

Polynomial Polynomial::constant(int dim, double c)
{
    Polynomial p(dim, 0);
    p.coeffs_[0] = c;
    return p;
}

Polynomial Polynomial::monomial(int dim, int a, int b, double c)
{
    if (dim == 1 && b != 0) throw std::invalid_argument("monomial: 1D monomial with y power");
    Polynomial p(dim, a + b);
    if (dim == 1)
        p.coeffs_[a] = c;
    else
        p.coeffs_[monomial_index(a, b)] = c;
    return p;
}

double Polynomial::coeff(int a, int b) const
{
    if (a + b > degree_) return 0.0;
    return dim_ == 1 ? coeffs_[a] : coeffs_[monomial_index(a, b)];
}

void Polynomial::set_coeff(int a, int b, double c)
{
    if (a + b > degree_) throw std::out_of_range("set_coeff: exceeds degree");
    if (dim_ == 1) {
        if (b != 0) throw std::invalid_argument("set_coeff: 1D with y power");
        coeffs_[a] = c;
    } else {
        coeffs_[monomial_index(a, b)] = c;
    }
}

Polynomial Polynomial::operator+(const Polynomial& q) const
{
    if (dim_ != q.dim_) throw std::invalid_argument("poly add: dimension mismatch");
    Polynomial r(dim_, std::max(degree_, q.degree_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) r.coeffs_[i] += coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) r.coeffs_[i] += q.coeffs_[i];
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& q) const { return *this + q * -1.0; }

Polynomial Polynomial::operator*(double s) const
{
    Polynomial r = *this;
    for (double& c : r.coeffs_) c *= s;
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& q) const
{
    if (dim_ != q.dim_) throw std::invalid_argument("poly mul: dimension mismatch");
    Polynomial r(dim_, degree_ + q.degree_);
    if (dim_ == 1) {
        for (int a = 0; a <= degree_; ++a)
            for (int c = 0; c <= q.degree_; ++c)
                r.coeffs_[a + c] += coeffs_[a] * q.coeffs_[c];
        return r;
    }
    for (int da = 0; da <= degree_; ++da)
        for (int b = 0; b <= da; ++b) {
            const double ca = coeffs_[monomial_index(da - b, b)];
            if (ca == 0.0) continue;
            for (int dc = 0; dc <= q.degree_; ++dc)
                for (int d = 0; d <= dc; ++d) {
                    const double cb = q.coeffs_[monomial_index(dc - d, d)];
                    if (cb == 0.0) continue;
                    r.coeffs_[monomial_index(da - b + dc - d, b + d)] += ca * cb;
                }
        }
    return r;
}

Polynomial Polynomial::diff(int axis) const
{
    if (dim_ == 1) {
        if (axis != 0) throw std::invalid_argument("diff: axis out of range for 1D");
        if (degree_ == 0) return constant(1, 0.0);
        Polynomial r(1, degree_ - 1);
        for (int a = 1; a <= degree_; ++a) r.coeffs_[a - 1] = a * coeffs_[a];
        return r;
    }
    if (axis != 0 && axis != 1) throw std::invalid_argument("diff: axis out of range");
    if (degree_ == 0) return constant(2, 0.0);
    Polynomial r(2, degree_ - 1);
    for (int d = 0; d <= degree_; ++d)
        for (int b = 0; b <= d; ++b) {
            const int a = d - b;
            const double c = coeffs_[monomial_index(a, b)];
            if (c == 0.0) continue;
            if (axis == 0 && a > 0) r.coeffs_[monomial_index(a - 1, b)] += a * c;
            if (axis == 1 && b > 0) r.coeffs_[monomial_index(a, b - 1)] += b * c;
        }
    return r;
}

double Polynomial::eval(double x, double y) const
{
    if (dim_ == 1) {
        double v = 0.0;
        for (int a = degree_; a >= 0; --a) v = v * x + coeffs_[a];
        return v;
    }
    // sum degree blocks, Horner in x within each fixed y power
    double v = 0.0;
    std::vector<double> ypow(degree_ + 1, 1.0);
    for (int b = 1; b <= degree_; ++b) ypow[b] = ypow[b - 1] * y;
    double xpow = 1.0;
    for (int a = 0; a <= degree_; ++a) {
        for (int b = 0; a + b <= degree_; ++b) {
            const double c = coeffs_[monomial_index(a, b)];
            if (c != 0.0) v += c * xpow * ypow[b];
        }
        xpow *= x;
    }
    return v;
}

Polynomial Polynomial::compose_linear(const std::array<double, 3>& xs,
                                      const std::array<double, 3>& ys) const
{
    if (dim_ != 2) throw std::invalid_argument("compose_linear: 2D only");
    const Polynomial lx = Polynomial::constant(2, xs[0]) + Polynomial::monomial(2, 1, 0, xs[1]) +
                          Polynomial::monomial(2, 0, 1, xs[2]);
    const Polynomial ly = Polynomial::constant(2, ys[0]) + Polynomial::monomial(2, 1, 0, ys[1]) +
                          Polynomial::monomial(2, 0, 1, ys[2]);
    std::vector<Polynomial> xp(degree_ + 1), yp(degree_ + 1);
    xp[0] = Polynomial::constant(2, 1.0);
    yp[0] = Polynomial::constant(2, 1.0);
    for (int i = 1; i <= degree_; ++i) {
        xp[i] = xp[i - 1] * lx;
        yp[i] = yp[i - 1] * ly;
    }
    Polynomial r(2, degree_);
    for (int d = 0; d <= degree_; ++d)
        for (int b = 0; b <= d; ++b) {
            const double c = coeffs_[monomial_index(d - b, b)];
            if (c != 0.0) r = r + xp[d - b] * yp[b] * c;
        }
    return r;
}

Polynomial Polynomial::compose_affine(const AffineMap& map) const
{
    const double inv = 1.0 / map.scale;
    if (dim_ == 1) {
        // p((s - ox)/scale)
        Polynomial ls = Polynomial::monomial(1, 1, 0, inv) + Polynomial::constant(1, -map.ox * inv);
        Polynomial r = Polynomial::constant(1, 0.0);
        Polynomial pw = Polynomial::constant(1, 1.0);
        for (int a = 0; a <= degree_; ++a) {
            r = r + pw * coeffs_[a];
            if (a < degree_) pw = pw * ls;
        }
        // keep degree slot even if leading coefficient cancels
        Polynomial out(1, degree_);
        for (int a = 0; a <= r.degree() && a <= degree_; ++a) out.coeffs_[a] = r.coeff(a);
        return out;
    }
    return compose_linear({-map.ox * inv, inv, 0.0}, {-map.oy * inv, 0.0, inv});
}

Polynomial Polynomial::restrict_line(double x0, double dx, double y0, double dy) const
{
    if (dim_ != 2) throw std::invalid_argument("restrict_line: 2D only");
    const Polynomial lx = Polynomial::constant(1, x0) + Polynomial::monomial(1, 1, 0, dx);
    const Polynomial ly = Polynomial::constant(1, y0) + Polynomial::monomial(1, 1, 0, dy);
    std::vector<Polynomial> xp(degree_ + 1), yp(degree_ + 1);
    xp[0] = Polynomial::constant(1, 1.0);
    yp[0] = Polynomial::constant(1, 1.0);
    for (int i = 1; i <= degree_; ++i) {
        xp[i] = xp[i - 1] * lx;
        yp[i] = yp[i - 1] * ly;
    }
    Polynomial r(1, degree_);
    for (int d = 0; d <= degree_; ++d)
        for (int b = 0; b <= d; ++b) {
            const double c = coeffs_[monomial_index(d - b, b)];
            if (c == 0.0) continue;
            const Polynomial term = xp[d - b] * yp[b] * c;
            for (int a = 0; a <= term.degree(); ++a)
                r.coeffs_[a] += term.coeffs_[a];
        }
    return r;
}

Polynomial Polynomial::trimmed(double tol) const
{
    int deg = 0;
    for (int d = 0; d <= degree_; ++d) {
        bool nonzero = false;
        if (dim_ == 1) {
            nonzero = std::abs(coeffs_[d]) > tol;
        } else {
            for (int b = 0; b <= d; ++b)
                if (std::abs(coeffs_[monomial_index(d - b, b)]) > tol) nonzero = true;
        }
        if (nonzero) deg = d;
    }
    Polynomial r(dim_, deg);
    for (std::size_t i = 0; i < r.coeffs_.size(); ++i)
        r.coeffs_[i] = std::abs(coeffs_[i]) > tol ? coeffs_[i] : 0.0;
    return r;
}

bool Polynomial::is_zero(double tol) const
{
    for (double c : coeffs_)
        if (std::abs(c) > tol) return false;
    return true;
}

double integrate_unit_segment(const Polynomial& p)
{
    if (p.dim() != 1) throw std::invalid_argument("integrate_unit_segment: 1D only");
    double v = 0.0;
    for (int a = 0; a <= p.degree(); ++a) v += p.coeff(a) / (a + 1);
    return v;
}

namespace {
// x^a y^b over the reference triangle: a! b! / (a+b+2)!
double simplex_moment(int a, int b)
{
    double v = 1.0;
    for (int i = 1; i <= b; ++i) v *= static_cast<double>(i) / (a + i);
    for (int i = a + b + 1; i <= a + b + 2; ++i) v /= i;
    return v;
}
} // namespace

double integrate_unit_triangle(const Polynomial& p)
{
    if (p.dim() != 2) throw std::invalid_argument("integrate_unit_triangle: 2D only");
    double v = 0.0;
    for (int d = 0; d <= p.degree(); ++d)
        for (int b = 0; b <= d; ++b) {
            const double c = p.coeff(d - b, b);
            if (c != 0.0) v += c * simplex_moment(d - b, b);
        }
    return v;
}

double integrate_unit_square(const Polynomial& p)
{
    if (p.dim() != 2) throw std::invalid_argument("integrate_unit_square: 2D only");
    double v = 0.0;
    for (int d = 0; d <= p.degree(); ++d)
        for (int b = 0; b <= d; ++b) {
            const int a = d - b;
            const double c = p.coeff(a, b);
            if (c != 0.0) v += c / ((a + 1.0) * (b + 1.0));
        }
    return v;
}

} // namespace wgs
