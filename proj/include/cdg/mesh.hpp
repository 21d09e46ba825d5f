#pragma once

#include <string>
#include <vector>

#include "cdg/geom.hpp"

namespace cdg {

enum class GeometryKind { PlanarPeriodic, Sphere };

struct MeshEdge {
    int v1 = -1, v2 = -1;  // endpoint vertex ids, ordered so the left cell is km
    int km = -1, kp = -1;  // adjacent cells; the unit normal points km -> kp
    double length = 0;     // Euclidean (chord) length
    Vec3 mid;              // edge midpoint (on the sphere for spherical meshes)
    Vec3 normal;           // unit normal at mid, tangent to the surface, km -> kp

    MeshEdge() = default;
    MeshEdge(int v1_, int v2_, int km_, int kp_) : v1(v1_), v2(v2_), km(km_), kp(kp_) {}
};

/// Unstructured horizontal Voronoi mesh, either doubly periodic planar or
/// spherical. Cell polygons are convex; every quantity the transport scheme
/// needs per cell is precomputed here.
struct HorizontalMesh {
    GeometryKind kind = GeometryKind::PlanarPeriodic;
    double R = 0;        // sphere radius (Sphere)
    double Lx = 0, Ly = 0;  // periodic box (PlanarPeriodic)

    std::vector<Vec3> center;                      // generator / cell center, global
    std::vector<Vec3> vert;                        // vertex positions, global
    std::vector<std::vector<int>> cell_verts;      // CCW vertex loop per cell
    std::vector<std::vector<int>> cell_edges;      // edges of each cell
    std::vector<MeshEdge> edges;
    std::vector<std::vector<int>> vertex_cells;    // cells meeting at each vertex
    std::vector<std::vector<int>> vertex_neighbors;  // cells sharing >= 1 vertex, excl. self

    std::vector<TangentFrame> frames;              // per cell (Sphere only)
    std::vector<Polygon> local_poly;               // cell polygon in its own frame, CCW
    std::vector<double> area;                      // local polygon area

    int ncells() const { return int(center.size()); }
    int nedges() const { return int(edges.size()); }
    int nverts() const { return int(vert.size()); }

    /// Shortest periodic image of an offset vector (identity on the sphere).
    Vec3 min_image(Vec3 d) const;

    /// Coordinates of a global position in cell k's local frame.
    PlanePoint project(int k, const Vec3& x) const;

    /// Inverse of project; on the plane this returns the representative
    /// nearest cell k's center (unwrapped).
    Vec3 unproject(int k, const PlanePoint& p) const;

    /// Cell k's polygon expressed in cell `frame_cell`'s local frame.
    Polygon cell_in_frame(int k, int frame_cell) const;

    /// Cells within `rings` edge-hops of {edge.km, edge.kp}; candidate source
    /// cells for swept-region clipping.
    std::vector<int> edge_candidates(int edge, int rings) const;

    /// Minimum center-to-center distance across edges (CFL length scale).
    double min_spacing() const;

    /// Structural and geometric integrity checks; throws MeshError.
    void validate() const;
};

/// Rebuild all derived fields (frames, local polygons, areas, adjacency,
/// edge geometry) from kind, box/radius, centers, vertices, cell loops and
/// edge connectivity stubs. Called by the builders and by load_mesh.
void finalize_mesh(HorizontalMesh& mesh);

/// Doubly periodic hexagonal Voronoi lattice. ny must be even so the rows
/// close around the torus. dx is the center spacing along x.
HorizontalMesh build_planar_hex_mesh(int nx, int ny, double dx);

/// Spherical centroidal-ish Voronoi mesh dual to an icosahedron subdivided
/// `level` times: 10*4^level + 2 cells (12 pentagons, the rest hexagons).
HorizontalMesh build_icosahedral_mesh(int level, double R);

/// Area of cell k measured on the sphere (spherical excess); equals the
/// planar polygon area for planar meshes. Used for validation only.
double surface_cell_area(const HorizontalMesh& mesh, int k);

/// JSON round trip of the connectivity (derived data is rebuilt on load).
void save_mesh(const HorizontalMesh& mesh, const std::string& path);
HorizontalMesh load_mesh(const std::string& path);
std::string mesh_to_json(const HorizontalMesh& mesh);
HorizontalMesh mesh_from_json(const std::string& text);

} // namespace cdg
