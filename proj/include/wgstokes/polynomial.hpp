#ifndef WGSTOKES_POLYNOMIAL_HPP
#define WGSTOKES_POLYNOMIAL_HPP

#include <array>
#include <vector>

namespace wgs {

/// Number of monomials of total degree <= degree in `dim` variables (dim = 1 or 2).
int poly_space_dim(int dim, int degree);

/// Position of x^a y^b in graded-lexicographic order (2D).
inline int monomial_index(int a, int b)
{
    const int d = a + b;
    return d * (d + 1) / 2 + b;
}

/// Scaled local frame x -> (x - origin) / scale.
struct AffineMap {
    double ox = 0.0;
    double oy = 0.0;
    double scale = 1.0;
};

/// Dense multivariate polynomial over monomials x^a y^b (a+b <= degree), or s^a in 1D.
/// Coefficients are stored graded-lexicographically; arithmetic is exact expansion.
class Polynomial {
public:
    Polynomial() : dim_(2), degree_(0), coeffs_(1, 0.0) {}
    Polynomial(int dim, int degree);

    static Polynomial constant(int dim, double c);
    static Polynomial monomial(int dim, int a, int b = 0, double c = 1.0);

    int dim() const { return dim_; }
    int degree() const { return degree_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double coeff(int a, int b = 0) const;
    void set_coeff(int a, int b, double c);
    void set_coeff(int a, double c) { set_coeff(a, 0, c); }

    Polynomial operator+(const Polynomial& q) const;
    Polynomial operator-(const Polynomial& q) const;
    Polynomial operator*(const Polynomial& q) const;
    Polynomial operator*(double s) const;
    Polynomial operator-() const { return *this * -1.0; }

    /// Partial derivative; axis 0 = x, 1 = y (1D accepts axis 0 only).
    Polynomial diff(int axis) const;

    double eval(double x, double y = 0.0) const;

    /// q(x) = p((x - origin)/scale), expanded exactly.
    Polynomial compose_affine(const AffineMap& map) const;

    /// General affine substitution x -> xs[0] + xs[1] X + xs[2] Y (2D -> 2D).
    Polynomial compose_linear(const std::array<double, 3>& xs,
                              const std::array<double, 3>& ys) const;

    /// Restriction of a 2D polynomial to the line (x0 + s dx, y0 + s dy) -> 1D in s.
    Polynomial restrict_line(double x0, double dx, double y0, double dy) const;

    /// Drop trailing all-zero degree blocks.
    Polynomial trimmed(double tol = 0.0) const;

    bool is_zero(double tol = 0.0) const;

private:
    int dim_;
    int degree_;
    std::vector<double> coeffs_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

/// Exact integral of a 1D polynomial over [0,1].
double integrate_unit_segment(const Polynomial& p);

/// Exact integral of a 2D polynomial over the reference triangle {x,y>=0, x+y<=1}.
double integrate_unit_triangle(const Polynomial& p);

/// Exact integral over the unit square (0,1)^2.
double integrate_unit_square(const Polynomial& p);

} // namespace wgs

#endif
