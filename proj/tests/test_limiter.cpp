#include <doctest.h>

#include <cmath>
#include <random>

#include "cdg/errors.hpp"
#include "cdg/limiter.hpp"
#include "cdg/mesh.hpp"
#include "cdg/transport.hpp"

using namespace cdg;

namespace {

/// Cell with the full complement of interior neighbors on the 6x4 mesh.
int interior_cell(const HorizontalMesh& mesh)
{
    for (int k = 0; k < mesh.ncells(); ++k) {
        const Vec3 p = mesh.center[k];
        if (p.x > 2000.0 && p.x < 4000.0 && p.y > 1500.0 && p.y < 2500.0) return k;
    }
    return 0;
}

double max_corner_excess(const SchemeWorkspace& ws, const TracerField& q, int k, int l,
                         double qmin, double qmax)
{
    const CellBasisData& cb = ws.cells[k];
    const double* c = q.moments(k, l);
    const int nh = q.J - 2;
    double excess = 0.0;
    for (int iv = 0; iv < cb.ncorners; ++iv) {
        const double* bh = cb.corner_beta(iv);
        double dh = 0.0;
        for (int i = 0; i < nh; ++i) dh += c[1 + i] * bh[i];
        for (int sz = -1; sz <= 1; sz += 2) {
            const double v = c[0] + dh + 0.5 * sz * c[q.J - 1];
            excess = std::max(excess, std::max(qmin - v, v - qmax));
        }
    }
    return excess;
}

} // namespace

TEST_SUITE("limiter") {

TEST_CASE("barth-jespersen leaves admissible reconstructions untouched")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const int k = interior_cell(mesh);

    TracerField q(mesh.ncells(), 1, 4);
    for (int i = 0; i < q.ncells; ++i) q.at(i, 0, 0) = 5.0;
    bool flip = false;
    for (int nb : mesh.vertex_neighbors[k]) {
        q.at(nb, 0, 0) = flip ? 4.0 : 6.0;
        flip = !flip;
    }
    // Largest corner deviation 0.5, allowed 1.0 either way: alpha stays 1.
    double bmax = 0.0;
    for (int iv = 0; iv < ws.cells[k].ncorners; ++iv)
        bmax = std::max(bmax, std::abs(ws.cells[k].corner_beta(iv)[0]));
    q.at(k, 0, 1) = 0.3 / bmax;
    q.at(k, 0, 3) = 0.4;  // corner deviation 0.3 + 0.2 = 0.5

    const TracerField before = q;
    barth_jespersen_3d(mesh, ws.cells, q);
    CHECK(q.at(k, 0, 1) == before.at(k, 0, 1));
    CHECK(q.at(k, 0, 3) == before.at(k, 0, 3));
}

TEST_CASE("barth-jespersen halves an overshoot of twice the allowance")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const int k = interior_cell(mesh);

    TracerField q(mesh.ncells(), 1, 4);
    for (int i = 0; i < q.ncells; ++i) q.at(i, 0, 0) = 5.0;
    bool flip = false;
    for (int nb : mesh.vertex_neighbors[k]) {
        q.at(nb, 0, 0) = flip ? 4.0 : 6.0;
        flip = !flip;
    }
    double bmax = 0.0;
    for (int iv = 0; iv < ws.cells[k].ncorners; ++iv)
        bmax = std::max(bmax, std::abs(ws.cells[k].corner_beta(iv)[0]));
    const double c1 = 2.0 / bmax;  // corner deviation 2, allowed 1
    q.at(k, 0, 1) = c1;

    barth_jespersen_3d(mesh, ws.cells, q);
    CHECK(q.at(k, 0, 0) == 5.0);
    CHECK(q.at(k, 0, 1) == doctest::Approx(0.5 * c1).epsilon(1e-14));
}

TEST_CASE("barth-jespersen flattens a local extremum completely")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const int k = interior_cell(mesh);

    TracerField q(mesh.ncells(), 1, 4);
    for (int i = 0; i < q.ncells; ++i) q.at(i, 0, 0) = 6.0;
    q.at(k, 0, 0) = 7.0;  // strict maximum: no deviation is admissible
    q.at(k, 0, 1) = 0.8;
    q.at(k, 0, 2) = -0.5;
    q.at(k, 0, 3) = 0.7;

    barth_jespersen_3d(mesh, ws.cells, q);
    CHECK(q.at(k, 0, 0) == 7.0);
    CHECK(q.at(k, 0, 1) == 0.0);
    CHECK(q.at(k, 0, 2) == 0.0);
    CHECK(q.at(k, 0, 3) == 0.0);
}

TEST_CASE("vertical neighbors widen the admissible range")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const int k = interior_cell(mesh);

    // Flat in the horizontal, stratified in the vertical: a vertical moment
    // that spans exactly the gap to the layers above and below survives in
    // the middle layer, while the same moment in the top layer (where only
    // the lower bound is widened) is a strict extremum and is flattened.
    TracerField q(mesh.ncells(), 3, 4);
    for (int i = 0; i < q.ncells; ++i) {
        q.at(i, 0, 0) = 0.4;
        q.at(i, 1, 0) = 1.0;
        q.at(i, 2, 0) = 1.6;
    }
    q.at(k, 0, 3) = -1.2;  // upper corner 1.0 fits, lower corner -0.2 does not
    q.at(k, 1, 3) = -1.2;  // corners 1.6 and 0.4: exactly the neighbor means

    barth_jespersen_3d(mesh, ws.cells, q);
    CHECK(q.at(k, 0, 3) == 0.0);
    CHECK(q.at(k, 1, 3) == -1.2);
}

TEST_CASE("barth-jespersen is idempotent and conservative on random fields")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});

    TracerField q(mesh.ncells(), 3, 4);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> um(-1.0, 1.0);
    for (double& v : q.c) v = um(rng);

    const TracerField raw = q;
    barth_jespersen_3d(mesh, ws.cells, q);
    const TracerField once = q;
    barth_jespersen_3d(mesh, ws.cells, q);
    for (std::size_t i = 0; i < q.c.size(); ++i) CHECK(q.c[i] == once.c[i]);

    for (int k = 0; k < q.ncells; ++k)
        for (int l = 0; l < 3; ++l) {
            CHECK(once.at(k, l, 0) == raw.at(k, l, 0));

            double qmin = raw.at(k, l, 0), qmax = qmin;
            for (int nb : mesh.vertex_neighbors[k]) {
                qmin = std::min(qmin, raw.at(nb, l, 0));
                qmax = std::max(qmax, raw.at(nb, l, 0));
            }
            for (int dl = -1; dl <= 1; dl += 2) {
                if (l + dl < 0 || l + dl >= 3) continue;
                qmin = std::min(qmin, raw.at(k, l + dl, 0));
                qmax = std::max(qmax, raw.at(k, l + dl, 0));
            }
            CHECK(max_corner_excess(ws, once, k, l, qmin, qmax) < 1e-12 * (qmax - qmin + 1.0));
        }
}

TEST_CASE("weno blend reproduces the frozen smooth-field weights")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const ColumnGrid cols = init_uniform_columns(mesh.ncells(), 1, 100.0);
    const int k = interior_cell(mesh);

    // Own gradient g, every edge neighbor 2g: smoothness ratio 1:4 turns
    // into weights 16:1, so the blend is (16 + 6 * 2) / (16 + 6) * g.
    const double g = 0.25;
    TracerField q(mesh.ncells(), 1, 4);
    for (int nb : mesh.vertex_neighbors[k]) q.at(nb, 0, 1) = 2.0 * g;
    q.at(k, 0, 1) = g;

    weno_blend_3d(mesh, ws.cells, cols, q);
    CHECK(q.at(k, 0, 1) == doctest::Approx(14.0 * g / 11.0).epsilon(1e-13));
    CHECK(q.at(k, 0, 0) == 0.0);
    CHECK(std::abs(q.at(k, 0, 2)) < 1e-15);
    CHECK(std::abs(q.at(k, 0, 3)) < 1e-15);
}

TEST_CASE("weno blend stays within the candidate hull")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    const SchemeWorkspace ws = make_workspace(mesh, SchemeConfig{});
    const ColumnGrid cols = init_uniform_columns(mesh.ncells(), 2, 200.0);

    TracerField q(mesh.ncells(), 2, 4);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> um(-1.0, 1.0);
    for (double& v : q.c) v = um(rng);
    const TracerField raw = q;

    weno_blend_3d(mesh, ws.cells, cols, q);
    for (int k = 0; k < q.ncells; ++k)
        for (int l = 0; l < 2; ++l)
            for (int j = 1; j < 4; ++j) {
                // The blended moment is a convex combination of candidates,
                // all of which are raw moments somewhere in the stencil
                // (uniform mesh: re-expansion is the identity).
                double cmin = raw.at(k, l, j), cmax = cmin;
                for (int e : mesh.cell_edges[k]) {
                    const MeshEdge& ed = mesh.edges[e];
                    const int nb = ed.km == k ? ed.kp : ed.km;
                    cmin = std::min(cmin, raw.at(nb, l, j));
                    cmax = std::max(cmax, raw.at(nb, l, j));
                }
                for (int dl = -1; dl <= 1; dl += 2) {
                    if (l + dl < 0 || l + dl >= 2) continue;
                    cmin = std::min(cmin, raw.at(k, l + dl, j));
                    cmax = std::max(cmax, raw.at(k, l + dl, j));
                }
                CHECK(q.at(k, l, j) >= cmin - 1e-12);
                CHECK(q.at(k, l, j) <= cmax + 1e-12);
            }

    // Means never move.
    for (int k = 0; k < q.ncells; ++k)
        for (int l = 0; l < 2; ++l) CHECK(q.at(k, l, 0) == raw.at(k, l, 0));
}

TEST_CASE("weno blend rejects the quadratic basis")
{
    const HorizontalMesh mesh = build_planar_hex_mesh(6, 4, 1000.0);
    SchemeConfig cfg;
    cfg.basis_order = 2;
    const SchemeWorkspace ws = make_workspace(mesh, cfg);
    const ColumnGrid cols = init_uniform_columns(mesh.ncells(), 1, 100.0);
    TracerField q(mesh.ncells(), 1, 7);
    CHECK_THROWS_AS(weno_blend_3d(mesh, ws.cells, cols, q), ConfigError);
}

} // TEST_SUITE
