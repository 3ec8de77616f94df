#ifndef WGSTOKES_MESH_HPP
#define WGSTOKES_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "wgstokes/quadrature.hpp"

namespace wgs {

/// Planar polygonal mesh of a simply connected domain. Elements are CCW
/// vertex cycles; edges and boundary flags are derived from connectivity.
struct PolyMesh {
    struct Edge {
        int v0 = -1; // v0 < v1, fixes the global edge parameterization
        int v1 = -1;
        int elem_left = -1;
        int elem_right = -1; // -1 for boundary edges
        bool boundary = false;
    };

    std::vector<Pt> vertices;
    std::vector<std::vector<int>> elements;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> element_edges; // aligned with the vertex cycle

    std::vector<Pt> centroid;
    std::vector<double> diameter;
    std::vector<double> area;

    int n_elements() const { return static_cast<int>(elements.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_vertices() const { return static_cast<int>(vertices.size()); }
    double h() const;
    double total_area() const;
};

/// Fan triangulation of one element from its centroid (a triangle element is
/// kept as a single piece). Every parent polygon edge stays intact as the
/// edge of exactly one sub-triangle.
struct SubTriangulation {
    struct SubEdge {
        int tri_left = -1;
        int tri_right = -1;
        Pt a, b;
        double nx = 0.0, ny = 0.0; // unit normal, left -> right
    };

    int element = -1;
    std::vector<std::array<Pt, 3>> triangles;
    std::vector<SubEdge> interior;
    std::vector<int> parent_edge_tri; // local edge index -> containing sub-triangle

    int n_tri() const { return static_cast<int>(triangles.size()); }
};

/// Build connectivity from raw vertices/element cycles. Clockwise cycles are
/// reoriented; a note per fix is appended to `warnings` when given.
PolyMesh build_mesh(std::vector<Pt> vertices, std::vector<std::vector<int>> elements,
                    std::vector<std::string>* warnings = nullptr);

PolyMesh gen_square_grid(int n);
PolyMesh gen_quad_grid(int n);
PolyMesh gen_polygon_grid(int n);

SubTriangulation subtriangulate(const PolyMesh& mesh, int element);

PolyMesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr);
void save_mesh(const PolyMesh& mesh, const std::string& path);

} // namespace wgs

#endif
