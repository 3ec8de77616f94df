#ifndef WGSTOKES_QUADRATURE_HPP
#define WGSTOKES_QUADRATURE_HPP

#include <array>
#include <vector>

namespace wgs {

struct Pt {
    double x = 0.0;
    double y = 0.0;
};

/// Quadrature rule; on the unit segment points carry y = 0.
struct QuadRule {
    std::vector<Pt> points;
    std::vector<double> weights;
    int exact_degree = 0;

    int size() const { return static_cast<int>(points.size()); }
};

/// Gauss rule on [0,1] with ceil((exact_degree+1)/2) points.
QuadRule edge_rule(int exact_degree);

/// Duffy-collapsed tensor Gauss rule on the reference triangle {x,y >= 0, x+y <= 1}.
QuadRule triangle_rule(int exact_degree);

/// Affine push-forward to a physical segment; weights scaled by its length.
QuadRule map_to_segment(const QuadRule& rule, const Pt& a, const Pt& b);

/// Affine push-forward to a physical triangle; weights scaled by |Jacobian| = 2*area.
QuadRule map_to_triangle(const QuadRule& rule, const Pt& v0, const Pt& v1, const Pt& v2);

double triangle_area(const Pt& v0, const Pt& v1, const Pt& v2);

} // namespace wgs

#endif
