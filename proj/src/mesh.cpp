#include "wgstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

namespace wgs {

namespace {

double polygon_signed_area(const std::vector<Pt>& verts, const std::vector<int>& cycle)
{
    double a = 0.0;
    const int n = static_cast<int>(cycle.size());
    for (int i = 0; i < n; ++i) {
        const Pt& p = verts[cycle[i]];
        const Pt& q = verts[cycle[(i + 1) % n]];
        a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
}

Pt polygon_centroid(const std::vector<Pt>& verts, const std::vector<int>& cycle, double area)
{
    double cx = 0.0, cy = 0.0;
    const int n = static_cast<int>(cycle.size());
    for (int i = 0; i < n; ++i) {
        const Pt& p = verts[cycle[i]];
        const Pt& q = verts[cycle[(i + 1) % n]];
        const double cr = p.x * q.y - q.x * p.y;
        cx += (p.x + q.x) * cr;
        cy += (p.y + q.y) * cr;
    }
    return {cx / (6.0 * area), cy / (6.0 * area)};
}

} // namespace

double PolyMesh::h() const
{
    double v = 0.0;
    for (double d : diameter) v = std::max(v, d);
    return v;
}

double PolyMesh::total_area() const
{
    double v = 0.0;
    for (double a : area) v += a;
    return v;
}

PolyMesh build_mesh(std::vector<Pt> vertices, std::vector<std::vector<int>> elements,
                    std::vector<std::string>* warnings)
{
    PolyMesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.elements = std::move(elements);

    const int nv = mesh.n_vertices();
    for (int e = 0; e < mesh.n_elements(); ++e) {
        auto& cycle = mesh.elements[e];
        if (cycle.size() < 3)
            throw std::runtime_error("build_mesh: element " + std::to_string(e) +
                                     " has fewer than 3 vertices");
        for (int v : cycle)
            if (v < 0 || v >= nv)
                throw std::runtime_error("build_mesh: element " + std::to_string(e) +
                                         " references nonexistent vertex " + std::to_string(v));
        double a = polygon_signed_area(mesh.vertices, cycle);
        if (a < 0.0) {
            std::reverse(cycle.begin(), cycle.end());
            a = -a;
            if (warnings)
                warnings->push_back("element " + std::to_string(e) +
                                    " was clockwise; reoriented");
        }
        if (a <= 1e-16)
            throw std::runtime_error("build_mesh: element " + std::to_string(e) +
                                     " has zero area");
        mesh.area.push_back(a);
        mesh.centroid.push_back(polygon_centroid(mesh.vertices, cycle, a));
        double diam = 0.0;
        for (std::size_t i = 0; i < cycle.size(); ++i)
            for (std::size_t j = i + 1; j < cycle.size(); ++j)
                diam = std::max(diam, std::hypot(mesh.vertices[cycle[i]].x - mesh.vertices[cycle[j]].x,
                                                 mesh.vertices[cycle[i]].y - mesh.vertices[cycle[j]].y));
        mesh.diameter.push_back(diam);
    }

    // edges numbered in order of first appearance over element cycles
    std::map<std::pair<int, int>, int> edge_id;
    mesh.element_edges.resize(mesh.n_elements());
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& cycle = mesh.elements[e];
        const int n = static_cast<int>(cycle.size());
        for (int i = 0; i < n; ++i) {
            const int a = cycle[i], b = cycle[(i + 1) % n];
            const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
            auto it = edge_id.find(key);
            int id;
            if (it == edge_id.end()) {
                id = mesh.n_edges();
                edge_id.emplace(key, id);
                PolyMesh::Edge edge;
                edge.v0 = key.first;
                edge.v1 = key.second;
                edge.elem_left = e;
                mesh.edges.push_back(edge);
            } else {
                id = it->second;
                if (mesh.edges[id].elem_right != -1)
                    throw std::runtime_error("build_mesh: non-manifold edge (" +
                                             std::to_string(key.first) + "," +
                                             std::to_string(key.second) + ")");
                mesh.edges[id].elem_right = e;
            }
            mesh.element_edges[e].push_back(id);
        }
    }
    for (auto& edge : mesh.edges) edge.boundary = (edge.elem_right == -1);
    return mesh;
}

PolyMesh gen_square_grid(int n)
{
    if (n < 1) throw std::invalid_argument("gen_square_grid: n >= 1 required");
    std::vector<Pt> verts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            verts.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    std::vector<std::vector<int>> elems;
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            elems.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    return build_mesh(std::move(verts), std::move(elems));
}

PolyMesh gen_quad_grid(int n)
{
    if (n < 2) throw std::invalid_argument("gen_quad_grid: n >= 2 required");
    const double h = 1.0 / n;
    std::vector<Pt> verts;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            double x = static_cast<double>(i) / n;
            double y = static_cast<double>(j) / n;
            if (i > 0 && i < n && j > 0 && j < n) {
                const double s = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                x += 0.2 * h * s;
                y -= 0.1 * h * s;
            }
            verts.push_back({x, y});
        }
    std::vector<std::vector<int>> elems;
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            elems.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
    return build_mesh(std::move(verts), std::move(elems));
}

namespace {

// Sutherland-Hodgman clip of a convex polygon against a half-plane a*x + b*y <= c.
std::vector<Pt> clip_halfplane(const std::vector<Pt>& poly, double a, double b, double c)
{
    std::vector<Pt> out;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Pt& p = poly[i];
        const Pt& q = poly[(i + 1) % n];
        const double dp = a * p.x + b * p.y - c;
        const double dq = a * q.x + b * q.y - c;
        const double tol = 1e-14;
        if (dp <= tol) out.push_back(p);
        if ((dp < -tol && dq > tol) || (dp > tol && dq < -tol)) {
            const double t = dp / (dp - dq);
            out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

std::vector<Pt> dedup_cycle(const std::vector<Pt>& poly, double tol)
{
    std::vector<Pt> out;
    for (const Pt& p : poly) {
        if (!out.empty() && std::abs(p.x - out.back().x) < tol && std::abs(p.y - out.back().y) < tol)
            continue;
        out.push_back(p);
    }
    if (out.size() > 1 && std::abs(out.front().x - out.back().x) < tol &&
        std::abs(out.front().y - out.back().y) < tol)
        out.pop_back();
    return out;
}

} // namespace

PolyMesh gen_polygon_grid(int n)
{
    if (n < 2) throw std::invalid_argument("gen_polygon_grid: n >= 2 required");
    // Stretched honeycomb: flat-left/right hexagons of half-width a and
    // half-height b laid out in n+1 columns, clipped to the unit square.
    // Boundary lines pass through cell centers, so clipped cells are
    // quadrilaterals (top/bottom, corners) and pentagons (left/right).
    const double a = 2.0 / (3.0 * n);
    const double b = 0.5 / n;
    std::vector<std::vector<Pt>> cells;
    for (int i = 0; i <= n; ++i) {
        const double xc = static_cast<double>(i) / n;
        const bool odd = (i % 2 == 1);
        const int j0 = 0;
        const int j1 = odd ? n - 1 : n;
        for (int j = j0; j <= j1; ++j) {
            const double yc = odd ? (2.0 * j + 1.0) / (2.0 * n) : static_cast<double>(j) / n;
            std::vector<Pt> hex = {{xc + a, yc},     {xc + a / 2, yc + b}, {xc - a / 2, yc + b},
                                   {xc - a, yc},     {xc - a / 2, yc - b}, {xc + a / 2, yc - b}};
            hex = clip_halfplane(hex, -1, 0, 0);  // x >= 0
            hex = clip_halfplane(hex, 1, 0, 1);   // x <= 1
            hex = clip_halfplane(hex, 0, -1, 0);  // y >= 0
            hex = clip_halfplane(hex, 0, 1, 1);   // y <= 1
            hex = dedup_cycle(hex, 1e-12 / n);
            if (hex.size() >= 3) cells.push_back(std::move(hex));
        }
    }

    // weld coincident vertices across cells
    const double tol = 1e-9 / n;
    std::vector<Pt> verts;
    std::map<std::pair<long long, long long>, int> lut;
    auto key_of = [&](const Pt& p) {
        return std::make_pair(static_cast<long long>(std::llround(p.x / tol)),
                              static_cast<long long>(std::llround(p.y / tol)));
    };
    std::vector<std::vector<int>> elems;
    for (const auto& cell : cells) {
        std::vector<int> cycle;
        for (const Pt& p : cell) {
            const auto key = key_of(p);
            auto it = lut.find(key);
            int id;
            if (it == lut.end()) {
                id = static_cast<int>(verts.size());
                lut.emplace(key, id);
                verts.push_back(p);
            } else {
                id = it->second;
            }
            cycle.push_back(id);
        }
        elems.push_back(std::move(cycle));
    }
    return build_mesh(std::move(verts), std::move(elems));
}

SubTriangulation subtriangulate(const PolyMesh& mesh, int element)
{
    if (element < 0 || element >= mesh.n_elements())
        throw std::invalid_argument("subtriangulate: element out of range");
    const auto& cycle = mesh.elements[element];
    const int n = static_cast<int>(cycle.size());
    SubTriangulation sub;
    sub.element = element;
    if (n == 3) {
        sub.triangles.push_back({mesh.vertices[cycle[0]], mesh.vertices[cycle[1]],
                                 mesh.vertices[cycle[2]]});
        sub.parent_edge_tri = {0, 0, 0};
        return sub;
    }
    const Pt c = mesh.centroid[element];
    for (int i = 0; i < n; ++i) {
        const Pt& p = mesh.vertices[cycle[i]];
        const Pt& q = mesh.vertices[cycle[(i + 1) % n]];
        if (triangle_area(c, p, q) <= 0.0)
            throw std::runtime_error("subtriangulate: element " + std::to_string(element) +
                                     " not star-shaped w.r.t. centroid");
        sub.triangles.push_back({c, p, q});
        sub.parent_edge_tri.push_back(i);
    }
    // interior sub-edge i runs centroid -> vertex i, between fan triangles i-1 and i
    for (int i = 0; i < n; ++i) {
        SubTriangulation::SubEdge se;
        se.tri_left = i;
        se.tri_right = (i + n - 1) % n;
        se.a = c;
        se.b = mesh.vertices[cycle[i]];
        const double len = std::hypot(se.b.x - se.a.x, se.b.y - se.a.y);
        // normal pointing from the left triangle into the right one
        se.nx = (se.b.y - se.a.y) / len;
        se.ny = -(se.b.x - se.a.x) / len;
        sub.interior.push_back(se);
    }
    return sub;
}

PolyMesh load_mesh(const std::string& path, std::vector<std::string>* warnings)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_mesh: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("load_mesh: malformed JSON in " + path + ": " + e.what());
    }
    if (!j.contains("vertices") || !j.contains("elements"))
        throw std::runtime_error("load_mesh: " + path + " missing 'vertices' or 'elements'");
    std::vector<Pt> verts;
    for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
        const auto& v = j["vertices"][i];
        if (!v.is_array() || v.size() != 2)
            throw std::runtime_error("load_mesh: vertex " + std::to_string(i) +
                                     " is not a pair [x, y]");
        verts.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    std::vector<std::vector<int>> elems;
    for (std::size_t i = 0; i < j["elements"].size(); ++i) {
        const auto& cell = j["elements"][i];
        if (!cell.is_array())
            throw std::runtime_error("load_mesh: element " + std::to_string(i) +
                                     " is not an index list");
        elems.push_back(cell.get<std::vector<int>>());
    }
    return build_mesh(std::move(verts), std::move(elems), warnings);
}

void save_mesh(const PolyMesh& mesh, const std::string& path)
{
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Pt& p : mesh.vertices) j["vertices"].push_back({p.x, p.y});
    j["elements"] = mesh.elements;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_mesh: cannot write " + path);
    out << j.dump(1) << "\n";
}

} // namespace wgs
