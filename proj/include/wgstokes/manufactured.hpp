#ifndef WGSTOKES_MANUFACTURED_HPP
#define WGSTOKES_MANUFACTURED_HPP

#include <string>

#include "wgstokes/polynomial.hpp"

namespace wgs {

/// Exact polynomial Stokes solution on (0,1)^2: divergence-free velocity from a
/// stream function, mean-zero pressure, and forcing f = -Laplace(u) + grad(p)
/// obtained by exact polynomial calculus.
struct ManufacturedCase {
    std::string name;
    Polynomial u1, u2;
    Polynomial p;
    Polynomial f1, f2;
};

/// u = (g_y, -g_x); p is shifted to zero mean over (0,1)^2.
ManufacturedCase from_stream_function(const Polynomial& g, const Polynomial& p,
                                      const std::string& name = "stream");

/// g = 2^4 (x - x^2)^2 (y - y^2)^2, p = g_xy.
ManufacturedCase case_s1();

/// u = (y, x), p = x - 1/2; reproduced exactly by the discrete scheme.
ManufacturedCase case_linear();

/// Resolve a CLI case name: "s1", "linear", or "stream:<coeff-file>". The coeff
/// file is JSON {"g": [[a,b,c],...], "p": [[a,b,c],...]} listing monomial terms
/// c * x^a y^b.
ManufacturedCase named_case(const std::string& name);

} // namespace wgs

#endif
