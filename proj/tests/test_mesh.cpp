#include <cmath>
#include <random>
#include <set>

#include <doctest.h>

#include "cdg/mesh.hpp"

using namespace cdg;

TEST_SUITE("mesh") {

TEST_CASE("hexagonal mesh counts and validation") {
    const HorizontalMesh m = build_planar_hex_mesh(6, 4, 1000.0);
    CHECK(m.ncells() == 24);
    CHECK(m.nverts() == 48);
    CHECK(m.nedges() == 72);
    m.validate();

    const double hex_area = std::sqrt(3.0) / 2.0 * 1000.0 * 1000.0;
    for (int k = 0; k < m.ncells(); ++k) {
        CHECK(m.cell_verts[k].size() == 6);
        CHECK(m.cell_edges[k].size() == 6);
        CHECK(std::abs(m.area[k] - hex_area) < 1e-9 * hex_area);
        CHECK(m.vertex_neighbors[k].size() == 6);  // hex tiling: all sharing is edge sharing
    }
    CHECK(std::abs(m.min_spacing() - 1000.0) < 1e-9);
}

TEST_CASE("hexagonal mesh rejects bad shapes") {
    CHECK_THROWS_AS(build_planar_hex_mesh(6, 5, 1.0), MeshError);   // odd ny
    CHECK_THROWS_AS(build_planar_hex_mesh(2, 4, 1.0), MeshError);   // too narrow
    CHECK_THROWS_AS(build_planar_hex_mesh(6, 4, -1.0), MeshError);  // bad spacing
}

TEST_CASE("periodic images and projection round trips") {
    const HorizontalMesh m = build_planar_hex_mesh(8, 6, 10.0);
    const Vec3 d = m.min_image({m.Lx - 1.0, 0.3, 0.0});
    CHECK(std::abs(d.x + 1.0) < 1e-12);
    CHECK(std::abs(d.y - 0.3) < 1e-12);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(0.0, m.Lx), uy(0.0, m.Ly);
    for (int trial = 0; trial < 100; ++trial) {
        const int k = int(rng() % m.ncells());
        const Vec3 x{ux(rng), uy(rng), 0.0};
        const PlanePoint p = m.project(k, x);
        const Vec3 back = m.unproject(k, p);
        const Vec3 diff = m.min_image(back - x);
        CHECK(diff.norm() < 1e-9);
    }
}

TEST_CASE("neighbor polygons share the connecting edge") {
    const HorizontalMesh m = build_planar_hex_mesh(6, 4, 100.0);
    for (int e = 0; e < m.nedges(); ++e) {
        const MeshEdge& ed = m.edges[e];
        const Polygon nb = m.cell_in_frame(ed.kp, ed.km);
        // Both endpoint vertices of the edge must appear in the neighbor's
        // polygon as seen from the km frame.
        for (int vid : {ed.v1, ed.v2}) {
            const PlanePoint want = m.project(ed.km, m.vert[vid]);
            double best = 1e300;
            for (const auto& p : nb.v)
                best = std::min(best, std::hypot(p.a - want.a, p.b - want.b));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("edge candidate rings grow around the edge") {
    const HorizontalMesh m = build_planar_hex_mesh(8, 8, 1.0);
    const auto r0 = m.edge_candidates(0, 0);
    CHECK(r0.size() == 2);
    const auto r1 = m.edge_candidates(0, 1);
    CHECK(r1.size() == 10);
    const auto r2 = m.edge_candidates(0, 2);
    CHECK(r2.size() > r1.size());
    const std::set<int> s2(r2.begin(), r2.end());
    for (int k : r1) CHECK(s2.count(k) == 1);
}

TEST_CASE("icosahedral mesh counts across levels") {
    for (int level = 0; level <= 2; ++level) {
        const HorizontalMesh m = build_icosahedral_mesh(level, 6.37122e6);
        const int f = 10 * (1 << (2 * level)) + 2;
        CHECK(m.ncells() == f);
        CHECK(m.nedges() == 30 * (1 << (2 * level)));
        CHECK(m.nverts() == 20 * (1 << (2 * level)));
        m.validate();

        int pentagons = 0;
        for (int k = 0; k < m.ncells(); ++k) {
            const std::size_t n = m.cell_verts[k].size();
            CHECK(n >= 5);
            CHECK(n <= 6);
            if (n == 5) ++pentagons;
        }
        CHECK(pentagons == 12);
    }
}

TEST_CASE("spherical cell areas tile the sphere") {
    const double R = 6.37122e6;
    const HorizontalMesh m = build_icosahedral_mesh(2, R);
    double total = 0;
    for (int k = 0; k < m.ncells(); ++k) total += surface_cell_area(m, k);
    const double want = 4.0 * M_PI * R * R;
    CHECK(std::abs(total - want) < 1e-12 * want);
    // The tangent-plane areas agree with the true areas to O((d/R)^2):
    // about 1.2% at this resolution, shrinking by 4x per level.
    for (int k = 0; k < m.ncells(); ++k) {
        const double rel = std::abs(m.area[k] - surface_cell_area(m, k)) / surface_cell_area(m, k);
        CHECK(rel < 2e-2);
    }
    const HorizontalMesh fine = build_icosahedral_mesh(3, R);
    double worst = 0;
    for (int k = 0; k < fine.ncells(); ++k)
        worst = std::max(worst,
                         std::abs(fine.area[k] - surface_cell_area(fine, k)) / fine.area[k]);
    CHECK(worst < 5e-3);
}

TEST_CASE("mesh JSON round trip") {
    for (const HorizontalMesh m :
         {build_planar_hex_mesh(5, 4, 250.0), build_icosahedral_mesh(1, 1.0e6)}) {
        const HorizontalMesh back = mesh_from_json(mesh_to_json(m));
        CHECK(back.ncells() == m.ncells());
        CHECK(back.nedges() == m.nedges());
        CHECK(back.nverts() == m.nverts());
        back.validate();
        for (int k = 0; k < m.ncells(); ++k)
            CHECK((back.center[k] - m.center[k]).norm() <= 1e-12 * (1.0 + m.center[k].norm()));
        for (int e = 0; e < m.nedges(); ++e) {
            CHECK(back.edges[e].km == m.edges[e].km);
            CHECK(back.edges[e].kp == m.edges[e].kp);
        }
    }
}

TEST_CASE("malformed mesh JSON is rejected") {
    CHECK_THROWS_AS(mesh_from_json("{not json"), MeshError);
    CHECK_THROWS_AS(mesh_from_json(R"({"kind": "sphere"})"), MeshError);
    CHECK_THROWS_AS(mesh_from_json(R"({"kind": "cylinder", "radius": 1.0})"), MeshError);
}

TEST_CASE("validation catches broken connectivity") {
    HorizontalMesh m = build_planar_hex_mesh(6, 4, 1.0);
    m.edges[0].kp = m.edges[0].km;  // degenerate edge pair
    CHECK_THROWS_AS(m.validate(), MeshError);

    HorizontalMesh m2 = build_planar_hex_mesh(6, 4, 1.0);
    m2.edges.pop_back();  // Euler characteristic breaks
    CHECK_THROWS_AS(m2.validate(), MeshError);
}

} // TEST_SUITE
