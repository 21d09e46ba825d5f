#include "cdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace cdg {

Vec3 HorizontalMesh::min_image(Vec3 d) const {
    if (kind == GeometryKind::PlanarPeriodic) {
        d.x -= Lx * std::round(d.x / Lx);
        d.y -= Ly * std::round(d.y / Ly);
    }
    return d;
}

PlanePoint HorizontalMesh::project(int k, const Vec3& x) const {
    if (kind == GeometryKind::Sphere) return frames[k].sphere_to_plane(x);
    const Vec3 d = min_image(x - center[k]);
    return {d.x, d.y};
}

Vec3 HorizontalMesh::unproject(int k, const PlanePoint& p) const {
    if (kind == GeometryKind::Sphere) return frames[k].plane_to_sphere(p);
    return center[k] + Vec3{p.a, p.b, 0.0};
}

Polygon HorizontalMesh::cell_in_frame(int k, int frame_cell) const {
    if (k == frame_cell) return local_poly[k];
    Polygon out;
    out.v.reserve(cell_verts[k].size());
    if (kind == GeometryKind::Sphere) {
        for (int vid : cell_verts[k]) out.v.push_back(frames[frame_cell].sphere_to_plane(vert[vid]));
    } else {
        // Wrap the center offset once, then keep the polygon rigid around it so
        // no individual vertex gets wrapped away from the rest.
        const Vec3 off = min_image(center[k] - center[frame_cell]);
        for (const auto& p : local_poly[k].v) out.v.push_back({p.a + off.x, p.b + off.y});
    }
    return out;
}

std::vector<int> HorizontalMesh::edge_candidates(int edge, int rings) const {
    const MeshEdge& e = edges[edge];
    std::vector<int> out = {e.km, e.kp};
    std::set<int> seen(out.begin(), out.end());
    std::size_t frontier_begin = 0;
    for (int r = 0; r < rings; ++r) {
        const std::size_t frontier_end = out.size();
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            for (int eid : cell_edges[out[i]]) {
                const MeshEdge& ne = edges[eid];
                const int other = (ne.km == out[i]) ? ne.kp : ne.km;
                if (seen.insert(other).second) out.push_back(other);
            }
        }
        frontier_begin = frontier_end;
    }
    std::sort(out.begin(), out.end());
    return out;
}

double HorizontalMesh::min_spacing() const {
    double d = std::numeric_limits<double>::max();
    for (const auto& e : edges) d = std::min(d, min_image(center[e.kp] - center[e.km]).norm());
    return d;
}

double surface_cell_area(const HorizontalMesh& mesh, int k) {
    if (mesh.kind == GeometryKind::PlanarPeriodic) return mesh.area[k];
    const auto& loop = mesh.cell_verts[k];
    const double R = mesh.R;
    double total = 0.0;
    const Vec3 a = mesh.vert[loop[0]] / R;
    for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
        const Vec3 b = mesh.vert[loop[i]] / R;
        const Vec3 c = mesh.vert[loop[i + 1]] / R;
        const double triple = dot(a, cross(b, c));
        const double denom = 1.0 + dot(a, b) + dot(b, c) + dot(a, c);
        total += 2.0 * std::atan2(triple, denom);
    }
    return total * R * R;
}

void finalize_mesh(HorizontalMesh& m) {
    const int F = m.ncells();

    if (m.kind == GeometryKind::Sphere) {
        m.frames.clear();
        m.frames.reserve(F);
        for (int k = 0; k < F; ++k) m.frames.push_back(TangentFrame::at(m.center[k], m.R));
    }

    m.local_poly.assign(F, {});
    m.area.assign(F, 0.0);
    for (int k = 0; k < F; ++k) {
        Polygon poly;
        poly.v.reserve(m.cell_verts[k].size());
        for (int vid : m.cell_verts[k]) poly.v.push_back(m.project(k, m.vert[vid]));
        if (poly.signed_area() < 0.0) {
            std::reverse(m.cell_verts[k].begin(), m.cell_verts[k].end());
            std::reverse(poly.v.begin(), poly.v.end());
        }
        m.area[k] = poly.signed_area();
        m.local_poly[k] = std::move(poly);
    }

    m.cell_edges.assign(F, {});
    for (int e = 0; e < m.nedges(); ++e) {
        m.cell_edges[m.edges[e].km].push_back(e);
        m.cell_edges[m.edges[e].kp].push_back(e);
    }

    m.vertex_cells.assign(m.nverts(), {});
    for (int k = 0; k < F; ++k)
        for (int vid : m.cell_verts[k]) m.vertex_cells[vid].push_back(k);

    m.vertex_neighbors.assign(F, {});
    for (int k = 0; k < F; ++k) {
        std::set<int> nb;
        for (int vid : m.cell_verts[k])
            for (int kk : m.vertex_cells[vid])
                if (kk != k) nb.insert(kk);
        m.vertex_neighbors[k].assign(nb.begin(), nb.end());
    }

    for (auto& e : m.edges) {
        const Vec3 p1 = m.vert[e.v1];
        Vec3 t = (m.kind == GeometryKind::Sphere) ? m.vert[e.v2] - p1
                                                  : m.min_image(m.vert[e.v2] - p1);
        e.length = t.norm();
        if (!(e.length > 0.0)) throw MeshError("zero-length edge");
        if (m.kind == GeometryKind::Sphere) {
            e.mid = (p1 + 0.5 * t).normalized() * m.R;
            // Rightward normal of v1->v2, same convention as the planar branch.
            e.normal = cross(t, e.mid / m.R).normalized();
            if (dot(e.normal, m.center[e.kp] - m.center[e.km]) < 0.0) {
                std::swap(e.v1, e.v2);
                e.normal = -1.0 * e.normal;
            }
        } else {
            e.mid = p1 + 0.5 * t;
            e.normal = Vec3{t.y, -t.x, 0.0}.normalized();
            if (dot(e.normal, m.min_image(m.center[e.kp] - m.center[e.km])) < 0.0) {
                std::swap(e.v1, e.v2);
                e.normal = -1.0 * e.normal;
            }
        }
    }
}

void HorizontalMesh::validate() const {
    const int F = ncells(), E = nedges(), V = nverts();
    if (F == 0 || E == 0 || V == 0) throw MeshError("empty mesh");

    const int euler = V - E + F;
    if (kind == GeometryKind::Sphere && euler != 2)
        throw MeshError("Euler characteristic is not 2 on the sphere");
    if (kind == GeometryKind::PlanarPeriodic && euler != 0)
        throw MeshError("Euler characteristic is not 0 on the torus");

    // Consecutive vertex pairs of each cell loop, for edge/loop consistency.
    std::vector<std::set<std::pair<int, int>>> loop_pairs(F);
    for (int k = 0; k < F; ++k) {
        const auto& loop = cell_verts[k];
        if (loop.size() < 3) throw MeshError("cell with fewer than 3 vertices");
        if (cell_edges[k].size() != loop.size())
            throw MeshError("cell edge count does not match vertex count");
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const int a = loop[i], b = loop[(i + 1) % loop.size()];
            if (a == b) throw MeshError("repeated vertex in cell loop");
            loop_pairs[k].insert({std::min(a, b), std::max(a, b)});
        }
        if (!(area[k] > 0.0)) throw MeshError("cell with non-positive area");
        // Convexity of the local polygon (required by the clipping kernel).
        const auto& pv = local_poly[k].v;
        const int n = int(pv.size());
        for (int i = 0; i < n; ++i) {
            const PlanePoint &p0 = pv[i], &p1 = pv[(i + 1) % n], &p2 = pv[(i + 2) % n];
            const double cr = (p1.a - p0.a) * (p2.b - p1.b) - (p1.b - p0.b) * (p2.a - p1.a);
            if (cr < -1e-12 * area[k]) throw MeshError("non-convex cell polygon");
        }
    }

    for (const auto& e : edges) {
        if (e.km < 0 || e.kp < 0 || e.km >= F || e.kp >= F || e.km == e.kp)
            throw MeshError("edge with invalid cell pair");
        const auto key = std::make_pair(std::min(e.v1, e.v2), std::max(e.v1, e.v2));
        if (!loop_pairs[e.km].count(key) || !loop_pairs[e.kp].count(key))
            throw MeshError("edge endpoints are not consecutive in both adjacent cells");
        const Vec3 d = min_image(center[e.kp] - center[e.km]);
        if (!(dot(e.normal, d) > 0.0)) throw MeshError("edge normal does not point km -> kp");
    }

    if (kind == GeometryKind::Sphere) {
        for (const auto& x : vert)
            if (std::abs(x.norm() - R) > 1e-12 * R) throw MeshError("vertex off the sphere");
        for (const auto& x : center)
            if (std::abs(x.norm() - R) > 1e-12 * R) throw MeshError("center off the sphere");
        double total = 0.0;
        for (int k = 0; k < F; ++k) total += surface_cell_area(*this, k);
        const double want = 4.0 * M_PI * R * R;
        if (std::abs(total - want) > 1e-12 * want)
            throw MeshError("cell areas do not tile the sphere");
    } else {
        double total = std::accumulate(area.begin(), area.end(), 0.0);
        if (std::abs(total - Lx * Ly) > 1e-12 * Lx * Ly)
            throw MeshError("cell areas do not tile the periodic box");
    }
}

HorizontalMesh build_planar_hex_mesh(int nx, int ny, double dx) {
    if (nx < 3 || ny < 4) throw MeshError("hex mesh needs nx >= 3 and ny >= 4");
    if (ny % 2 != 0) throw MeshError("hex mesh needs even ny to close the torus");
    if (!(dx > 0.0)) throw MeshError("hex mesh needs positive spacing");

    HorizontalMesh m;
    m.kind = GeometryKind::PlanarPeriodic;
    const double rowdy = std::sqrt(3.0) / 2.0 * dx;  // row-to-row spacing
    const double h6 = dx / (2.0 * std::sqrt(3.0));   // half the vertical edge length
    m.Lx = nx * dx;
    m.Ly = ny * rowdy;

    const int F = nx * ny;
    m.center.resize(F);
    m.vert.resize(2 * F);
    m.cell_verts.assign(F, {});

    auto cell_id = [&](int i, int j) {
        return ((j % ny + ny) % ny) * nx + ((i % nx + nx) % nx);
    };
    auto vn = [&](int i, int j) { return 2 * cell_id(i, j); };      // north vertex of cell
    auto vs = [&](int i, int j) { return 2 * cell_id(i, j) + 1; };  // south vertex of cell

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = j * nx + i;
            const Vec3 c{(i + 0.5 * (j & 1)) * dx, j * rowdy, 0.0};
            m.center[k] = c;
            m.vert[2 * k] = c + Vec3{0.0, 2.0 * h6, 0.0};
            m.vert[2 * k + 1] = c - Vec3{0.0, 2.0 * h6, 0.0};
        }
    }

    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int k = j * nx + i;
            const int ine = (j & 1) ? i + 1 : i;  // column of the NE neighbour
            const int ise = ine;                  // rows above and below mirror each other
            // CCW from the east-bottom corner.
            m.cell_verts[k] = {vn(ise, j - 1),     vs(ine, j + 1), vn(i, j),
                               vs(ine - 1, j + 1), vn(ise - 1, j - 1), vs(i, j)};
            // Each cell owns its E, NE and NW edges.
            m.edges.push_back({vn(ise, j - 1), vs(ine, j + 1), k, cell_id(i + 1, j)});
            m.edges.push_back({vs(ine, j + 1), vn(i, j), k, cell_id(ine, j + 1)});
            m.edges.push_back({vn(i, j), vs(ine - 1, j + 1), k, cell_id(ine - 1, j + 1)});
        }
    }

    finalize_mesh(m);
    return m;
}

HorizontalMesh build_icosahedral_mesh(int level, double R) {
    if (level < 0 || level > 8) throw MeshError("icosahedral level must be in [0, 8]");
    if (!(R > 0.0)) throw MeshError("sphere radius must be positive");

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> gen = {
        {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : gen) v = v.normalized();
    std::vector<std::array<int, 3>> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int lv = 0; lv < level; ++lv) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            gen.push_back((gen[a] + gen[b]).normalized());
            midpoint.emplace(key, int(gen.size()) - 1);
            return int(gen.size()) - 1;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(4 * tris.size());
        for (const auto& t : tris) {
            const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    HorizontalMesh m;
    m.kind = GeometryKind::Sphere;
    m.R = R;
    m.center.reserve(gen.size());
    for (const auto& g : gen) m.center.push_back(g * R);

    // Voronoi vertices are triangle circumcenters.
    m.vert.resize(tris.size());
    for (std::size_t t = 0; t < tris.size(); ++t) {
        const Vec3 &a = gen[tris[t][0]], &b = gen[tris[t][1]], &c = gen[tris[t][2]];
        Vec3 cc = cross(b - a, c - a).normalized();
        if (dot(cc, a + b + c) < 0.0) cc = -1.0 * cc;
        m.vert[t] = cc * R;
    }

    // Cell loops: incident triangles of each generator, sorted CCW in its frame.
    std::vector<std::vector<int>> incident(gen.size());
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int c : tris[t]) incident[c].push_back(int(t));
    m.cell_verts.resize(gen.size());
    for (std::size_t k = 0; k < gen.size(); ++k) {
        const TangentFrame fr = TangentFrame::at(m.center[k], R);
        auto& loop = m.cell_verts[k];
        loop = incident[k];
        std::vector<double> ang(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const PlanePoint p = fr.sphere_to_plane(m.vert[loop[i]]);
            ang[i] = std::atan2(p.b, p.a);
        }
        std::vector<int> order(loop.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ang[a] < ang[b]; });
        std::vector<int> sorted(loop.size());
        for (std::size_t i = 0; i < loop.size(); ++i) sorted[i] = loop[order[i]];
        loop = std::move(sorted);
    }

    // One Voronoi edge per Delaunay edge, joining the two flanking circumcenters.
    std::map<std::pair<int, int>, std::array<int, 2>> flank;
    for (std::size_t t = 0; t < tris.size(); ++t) {
        for (int s = 0; s < 3; ++s) {
            const int a = tris[t][s], b = tris[t][(s + 1) % 3];
            const auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto [it, fresh] = flank.emplace(key, std::array<int, 2>{int(t), -1});
            if (!fresh) it->second[1] = int(t);
        }
    }
    for (const auto& [key, ts] : flank) {
        if (ts[1] < 0) throw MeshError("open triangulation edge");
        m.edges.push_back({ts[0], ts[1], key.first, key.second});
    }

    finalize_mesh(m);
    return m;
}

} // namespace cdg
