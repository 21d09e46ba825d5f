#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cdg/basis.hpp"
#include "cdg/column.hpp"
#include "cdg/geom.hpp"
#include "cdg/limiter.hpp"
#include "cdg/mesh.hpp"
#include "cdg/velocity.hpp"

namespace cdg {

struct SchemeConfig {
    int basis_order = 1;
    /// Quadrature order for polygon pieces; 0 picks a default adequate for
    /// products of two basis expansions of the configured order.
    int quad_order = 0;
    int trace_substeps = 3;
    /// Breadth of the candidate-cell search around each edge.
    int candidate_rings = 2;
    /// Flux renormalization toward the consistent volume transport. Disabling
    /// it degrades free-stream preservation to the size of the quadrature
    /// error and is only meant for diagnostics.
    bool renormalize = true;
    LimiterKind limiter = LimiterKind::BarthJespersen;
    /// Relative defect in the swept-region partition of unity that triggers a
    /// HaloError (candidate halo too small for the CFL actually run).
    double partition_tol = 1e-9;

    int effective_quad_order() const { return quad_order > 0 ? quad_order : (basis_order == 2 ? 3 : 2); }
};

/// Precomputed per-mesh tables: cell basis/quadrature data and the candidate
/// source cells for every edge.
struct SchemeWorkspace {
    SchemeConfig cfg;
    std::vector<CellBasisData> cells;
    std::vector<std::vector<int>> edge_candidates;
    double mean_cell_area = 0.0;
};

SchemeWorkspace make_workspace(const HorizontalMesh& mesh, const SchemeConfig& cfg);

// --- characteristic tracing -------------------------------------------------

/// Horizontal characteristic of dx/dt = u(x, t), classical RK4; every stage
/// and the result are renormalized to the sphere when kind == Sphere.
/// t_to < t_from integrates backward.
Vec3 trace_horizontal(GeometryKind kind, double R, const Vec3& x0, double t_from, double t_to,
                      const VelocityField& field, int substeps);

/// Stage positions/times of a horizontal trace, recorded so that the vertical
/// coordinate of several points sharing the same horizontal start can be
/// advanced with the exact joint-RK4 increments without re-tracing.
struct HorizontalPath {
    double dt = 0.0;               // per-substep increment (signed)
    std::vector<Vec3> stage_x;     // 4 entries per substep
    std::vector<double> stage_t;   // matching times
    Vec3 end;
};

HorizontalPath trace_horizontal_path(GeometryKind kind, double R, const Vec3& x0, double t_from,
                                     double t_to, const VelocityField& field, int substeps);

/// Grid-relative vertical displacement accumulated along a recorded
/// horizontal path under w - w_r. Together with the path this reproduces the
/// joint RK4 for (dx/dt, dz/dt) = (u, w - w_r) exactly, since u does not
/// depend on z. Returned as an increment so that a Lagrangian grid (w == w_r)
/// yields exactly 0.0 and height-independent velocities yield
/// bitwise-identical displacements for every starting height.
double trace_vertical_increment(const HorizontalPath& path, double z0, const VelocityField& field);

// --- swept regions ----------------------------------------------------------

/// A simple (possibly concave) lobe of the swept region with its transport
/// sign: +1 contributes km -> kp transport, -1 the reverse.
struct SweptLobe {
    Polygon poly;   // counterclockwise
    double sign = 1.0;
};

struct SweptRegion {
    int edge = -1;
    int host = -1;                 // cell frame holding all coordinates
    PlanePoint v1, v2, d1, d2;     // edge endpoints and their departure points
    double quad_area = 0.0;        // signed area of (v1 v2 d2 d1); > 0 => net km -> kp
    std::vector<SweptLobe> lobes;  // empty when the edge did not move
};

/// Backward-trace the edge endpoints over [t, t+dt] and assemble the swept
/// quadrilateral in the frame of the upwind cell, splitting it into two
/// signed triangles when it self-intersects (bowtie).
SweptRegion build_swept_region(const HorizontalMesh& mesh, int edge, const VelocityField& field,
                               double t, double dt, int substeps);

/// One clipped piece of a swept lobe lying inside source cell `src`.
struct SweptPiece {
    int src = -1;
    double sign = 1.0;
    Polygon poly;   // counterclockwise, in the host frame of the region
};

/// Clip every lobe against the candidate cells (all in the host frame) and
/// verify the pieces partition the lobe. A relative defect above
/// partition_tol throws HaloError.
std::vector<SweptPiece> intersect_swept(const HorizontalMesh& mesh, const SweptRegion& region,
                                        const std::vector<int>& candidates, double partition_tol,
                                        double area_scale);

// --- volume transports and column motion ------------------------------------

struct VolumeTransports {
    /// Consistent per-edge, per-layer volume transport over the step,
    /// positive km -> kp. Indexed [edge * L + layer].
    std::vector<double> vcon;
    /// Net upward volume transport across interface I of column k over the
    /// step, indexed [k * (L+1) + I]; always 0 at the surface and bottom.
    std::vector<double> wiface;
    /// Departure height of interface I relative to the moving grid.
    std::vector<double> zdep;
};

VolumeTransports compute_volume_transports(const HorizontalMesh& mesh, const SchemeWorkspace& ws,
                                           const ColumnGrid& cols, const VelocityField& field,
                                           double t, double dt);

/// Layer-continuity update: thickness absorbs the divergence of the
/// consistent transports, bottom interface stays fixed, the free surface
/// emerges at the top.
ColumnGrid advance_columns_continuity(const HorizontalMesh& mesh, const SchemeWorkspace& ws,
                                      const ColumnGrid& cols, const VolumeTransports& vt);

/// Prescribed-motion update: every interface follows dz/dt = w_r from its
/// own height (RK4). Thicknesses are updated from increment differences, so
/// rigid (height-independent) motion preserves them bitwise.
ColumnGrid advance_columns_prescribed(const HorizontalMesh& mesh, const ColumnGrid& cols,
                                      const VelocityField& field, double t, double dt,
                                      int substeps);

// --- fluxes -------------------------------------------------------------

/// Per-edge flux ledger. `mean` holds the renormalized mean-row flux shared
/// by both sides; the moment rows are per-side because each side projects the
/// transported tracer onto its own basis. Indexed [layer] and
/// [layer * (J-1) + j].
struct EdgeLedger {
    int edge = -1;
    std::vector<double> mean;
    std::vector<double> vcdg;
    std::vector<double> r;
    std::vector<double> mom_km;
    std::vector<double> mom_kp;
};

EdgeLedger edge_flux(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const TracerField& q,
                     const ColumnGrid& cols_n, const VelocityField& field, int edge, double t,
                     double dt, const double* vcon_edge);

/// Convenience wrapper exposing the two volume fluxes of one edge (consistent
/// and characteristic) for diagnostics and tests.
void volume_fluxes(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const ColumnGrid& cols,
                   const VelocityField& field, int edge, double t, double dt,
                   std::vector<double>& vcon, std::vector<double>& vcdg);

// --- full step ----------------------------------------------------------

/// One characteristic DG step of the layered tracer field: old-mass
/// projection, horizontal edge fluxes, vertical interface fluxes, per-element
/// solve on the advanced column geometry, then the configured limiter. The
/// caller supplies the advanced columns (continuity or prescribed) and the
/// matching transports.
TracerField step3d(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const TracerField& q,
                   const ColumnGrid& cols_n, const ColumnGrid& cols_np1,
                   const VolumeTransports& vt, const VelocityField& field, double t, double dt);

/// Project an analytic tracer (function of horizontal position and height)
/// onto the modal basis, layer by layer.
template <class F>
TracerField project_tracer(const HorizontalMesh& mesh, const SchemeWorkspace& ws,
                           const ColumnGrid& cols, F&& fn)
{
    const int L = cols.nlayers;
    const int J = basis_size(ws.cfg.basis_order);
    TracerField q(mesh.ncells(), L, J);
    std::vector<double> rhs(J), sol(J);
    const double inv2s3 = 0.5 / std::sqrt(3.0);
    for (int k = 0; k < mesh.ncells(); ++k) {
        const CellBasisData& cb = ws.cells[k];
        for (int l = 0; l < L; ++l) {
            const double h = cols.thickness(k, l);
            const double zm = cols.zmid(k, l);
            const double wz = 0.5 * h;
            std::fill(rhs.begin(), rhs.end(), 0.0);
            for (int ip = 0; ip < static_cast<int>(cb.quad.pts.size()); ++ip) {
                const Vec3 xg = mesh.unproject(k, cb.quad.pts[ip]);
                const double w2 = cb.quad.w[ip];
                const double* bh = cb.quad_beta(ip);
                for (int iz = 0; iz < 2; ++iz) {
                    const double zeta = (iz == 0 ? -1.0 : 1.0) * inv2s3 * h;
                    const double val = fn(xg, zm + zeta);
                    const double wv = w2 * wz * val;
                    rhs[0] += wv;
                    for (int j = 0; j + 1 < J; ++j) {
                        const double b = (j + 1 < J - 1) ? bh[j] : zeta / h;
                        rhs[j + 1] += wv * b;
                    }
                }
            }
            ElementMatrix M = mass_matrix(cb.hb, cb.gram.data(), cb.area_q, h);
            M.solve(rhs.data(), sol.data());
            for (int j = 0; j < J; ++j) q.at(k, l, j) = sol[j];
        }
    }
    return q;
}

} // namespace cdg
