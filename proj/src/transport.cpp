#include "cdg/transport.hpp"

#include <cmath>
#include <cstddef>

#include "cdg/errors.hpp"
#include "cdg/vertical.hpp"

namespace cdg {

namespace {

constexpr double kInv2Sqrt3 = 0.28867513459481287;  // 1 / (2 sqrt(3))

Vec3 on_surface(GeometryKind kind, double R, const Vec3& x)
{
    return kind == GeometryKind::Sphere ? x.normalized() * R : x;
}

/// Consistent instantaneous transport across edge e (volume per unit
/// thickness per unit time), evaluated at mid-step time. Positive km -> kp.
double edge_transport_rate(const HorizontalMesh& mesh, const VelocityField& field, int e,
                           double tmid)
{
    const MeshEdge& ed = mesh.edges[e];
    if (field.edge_transport) return field.edge_transport(mesh.vert[ed.v1], mesh.vert[ed.v2], tmid);
    return dot(field.u(ed.mid, tmid), ed.normal) * ed.length;
}

} // namespace

SchemeWorkspace make_workspace(const HorizontalMesh& mesh, const SchemeConfig& cfg)
{
    if (cfg.basis_order == 2 && mesh.kind == GeometryKind::Sphere)
        throw ConfigError("quadratic basis is only supported on planar meshes");
    if (cfg.trace_substeps < 1) throw ConfigError("trace_substeps must be >= 1");
    if (cfg.candidate_rings < 1) throw ConfigError("candidate_rings must be >= 1");

    SchemeWorkspace ws;
    ws.cfg = cfg;
    ws.cells.reserve(mesh.ncells());
    double total_area = 0.0;
    for (int k = 0; k < mesh.ncells(); ++k) {
        ws.cells.push_back(
            build_cell_basis(mesh.local_poly[k], cfg.basis_order, cfg.effective_quad_order()));
        total_area += ws.cells.back().area_q;
    }
    ws.mean_cell_area = total_area / mesh.ncells();
    ws.edge_candidates.reserve(mesh.nedges());
    for (int e = 0; e < mesh.nedges(); ++e)
        ws.edge_candidates.push_back(mesh.edge_candidates(e, cfg.candidate_rings));
    return ws;
}

// --- characteristic tracing -------------------------------------------------

Vec3 trace_horizontal(GeometryKind kind, double R, const Vec3& x0, double t_from, double t_to,
                      const VelocityField& field, int substeps)
{
    if (substeps < 1) throw ConfigError("trace_horizontal: substeps must be >= 1");
    const double dt = (t_to - t_from) / substeps;
    Vec3 x = x0;
    double t = t_from;
    for (int s = 0; s < substeps; ++s) {
        const Vec3 k1 = field.u(x, t);
        const Vec3 k2 = field.u(on_surface(kind, R, x + 0.5 * dt * k1), t + 0.5 * dt);
        const Vec3 k3 = field.u(on_surface(kind, R, x + 0.5 * dt * k2), t + 0.5 * dt);
        const Vec3 k4 = field.u(on_surface(kind, R, x + dt * k3), t + dt);
        x = on_surface(kind, R, x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        t = t_from + (s + 1) * dt;
    }
    return x;
}

HorizontalPath trace_horizontal_path(GeometryKind kind, double R, const Vec3& x0, double t_from,
                                     double t_to, const VelocityField& field, int substeps)
{
    if (substeps < 1) throw ConfigError("trace_horizontal_path: substeps must be >= 1");
    HorizontalPath path;
    path.dt = (t_to - t_from) / substeps;
    path.stage_x.reserve(std::size_t(substeps) * 4);
    path.stage_t.reserve(std::size_t(substeps) * 4);
    const double dt = path.dt;
    Vec3 x = x0;
    double t = t_from;
    for (int s = 0; s < substeps; ++s) {
        const Vec3 x1 = x;
        const Vec3 k1 = field.u(x1, t);
        const Vec3 x2 = on_surface(kind, R, x + 0.5 * dt * k1);
        const Vec3 k2 = field.u(x2, t + 0.5 * dt);
        const Vec3 x3 = on_surface(kind, R, x + 0.5 * dt * k2);
        const Vec3 k3 = field.u(x3, t + 0.5 * dt);
        const Vec3 x4 = on_surface(kind, R, x + dt * k3);
        const Vec3 k4 = field.u(x4, t + dt);
        path.stage_x.push_back(x1);
        path.stage_x.push_back(x2);
        path.stage_x.push_back(x3);
        path.stage_x.push_back(x4);
        path.stage_t.push_back(t);
        path.stage_t.push_back(t + 0.5 * dt);
        path.stage_t.push_back(t + 0.5 * dt);
        path.stage_t.push_back(t + dt);
        x = on_surface(kind, R, x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
        t = t_from + (s + 1) * dt;
    }
    path.end = x;
    return path;
}

double trace_vertical_increment(const HorizontalPath& path, double z0, const VelocityField& field)
{
    const double dt = path.dt;
    const int substeps = int(path.stage_t.size() / 4);
    auto rel = [&](const Vec3& x, double z, double t) { return field.w(x, z, t) - field.w_r(x, z, t); };
    double dz = 0.0;
    for (int s = 0; s < substeps; ++s) {
        const int i = 4 * s;
        const double k1 = rel(path.stage_x[i], z0 + dz, path.stage_t[i]);
        const double k2 = rel(path.stage_x[i + 1], z0 + (dz + 0.5 * dt * k1), path.stage_t[i + 1]);
        const double k3 = rel(path.stage_x[i + 2], z0 + (dz + 0.5 * dt * k2), path.stage_t[i + 2]);
        const double k4 = rel(path.stage_x[i + 3], z0 + (dz + dt * k3), path.stage_t[i + 3]);
        dz += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return dz;
}

// --- swept regions ----------------------------------------------------------

SweptRegion build_swept_region(const HorizontalMesh& mesh, int edge, const VelocityField& field,
                               double t, double dt, int substeps)
{
    const MeshEdge& ed = mesh.edges[edge];
    SweptRegion region;
    region.edge = edge;

    const Vec3 V1 = mesh.vert[ed.v1];
    const Vec3 V2 = mesh.vert[ed.v2];
    const Vec3 D1 = trace_horizontal(mesh.kind, mesh.R, V1, t + dt, t, field, substeps);
    const Vec3 D2 = trace_horizontal(mesh.kind, mesh.R, V2, t + dt, t, field, substeps);

    auto project_all = [&](int k) {
        region.v1 = mesh.project(k, V1);
        region.v2 = mesh.project(k, V2);
        region.d1 = mesh.project(k, D1);
        region.d2 = mesh.project(k, D2);
    };
    auto quad_area = [&]() {
        Polygon quad;
        quad.v = {region.v1, region.v2, region.d2, region.d1};
        return quad.signed_area();
    };

    project_all(ed.km);
    region.host = ed.km;
    region.quad_area = quad_area();
    if (region.quad_area < 0.0) {
        // Net transport kp -> km: host the region in the upwind (kp) frame.
        region.host = ed.kp;
        project_all(ed.kp);
        region.quad_area = quad_area();
    }

    const bool moved1 = D1.x != V1.x || D1.y != V1.y || D1.z != V1.z;
    const bool moved2 = D2.x != V2.x || D2.y != V2.y || D2.z != V2.z;
    if (!moved1 && !moved2) return region;  // stationary edge, nothing swept

    auto add_lobe = [&](const Polygon& poly) {
        const double a = poly.signed_area();
        if (a == 0.0) return;
        SweptLobe lobe;
        lobe.poly = poly;
        lobe.sign = a > 0.0 ? 1.0 : -1.0;
        if (a < 0.0) lobe.poly.reverse();
        region.lobes.push_back(lobe);
    };

    // The quad (v1 v2 d2 d1) self-intersects in one of two ways: the
    // trajectory sides (v2 -> d2) and (d1 -> v1) cross (converging
    // characteristics), or u.n reverses sign along the edge so the departure
    // segment (d2 -> d1) crosses the edge itself. Either way, split at the
    // intersection into two opposite-sign triangles; their signed areas sum
    // to the signed area of the quad.
    PlanePoint X;
    Polygon t1, t2;
    if (segment_intersection(region.v2, region.d2, region.d1, region.v1, X)) {
        t1.v = {region.v1, region.v2, X};
        t2.v = {X, region.d2, region.d1};
        add_lobe(t1);
        add_lobe(t2);
    } else if (segment_intersection(region.v1, region.v2, region.d2, region.d1, X)) {
        t1.v = {X, region.v2, region.d2};
        t2.v = {X, region.d1, region.v1};
        add_lobe(t1);
        add_lobe(t2);
    } else {
        Polygon quad;
        quad.v = {region.v1, region.v2, region.d2, region.d1};
        add_lobe(quad);
    }
    return region;
}

std::vector<SweptPiece> intersect_swept(const HorizontalMesh& mesh, const SweptRegion& region,
                                        const std::vector<int>& candidates, double partition_tol,
                                        double area_scale)
{
    std::vector<SweptPiece> pieces;
    for (const SweptLobe& lobe : region.lobes) {
        const double lobe_area = lobe.poly.signed_area();  // > 0 (CCW)
        double covered = 0.0;
        for (int src : candidates) {
            Polygon cell = mesh.cell_in_frame(src, region.host);
            Polygon clipped = clip_convex(lobe.poly, cell);
            if (clipped.empty()) continue;
            const double a = clipped.signed_area();
            if (a <= 0.0) continue;
            covered += a;
            SweptPiece piece;
            piece.src = src;
            piece.sign = lobe.sign;
            piece.poly = std::move(clipped);
            pieces.push_back(std::move(piece));
        }
        const double defect = std::abs(lobe_area - covered);
        if (defect > partition_tol * lobe_area + 1e-14 * area_scale)
            throw HaloError("swept region of edge " + std::to_string(region.edge) +
                            " is not covered by the candidate cells (defect " +
                            std::to_string(defect) + "); increase candidate_rings");
    }
    return pieces;
}

// --- volume transports and column motion ------------------------------------

VolumeTransports compute_volume_transports(const HorizontalMesh& mesh, const SchemeWorkspace& ws,
                                           const ColumnGrid& cols, const VelocityField& field,
                                           double t, double dt)
{
    const int L = cols.nlayers;
    const double tmid = t + 0.5 * dt;
    VolumeTransports vt;
    vt.vcon.assign(std::size_t(mesh.nedges()) * L, 0.0);
    vt.wiface.assign(std::size_t(mesh.ncells()) * (L + 1), 0.0);
    vt.zdep.assign(std::size_t(mesh.ncells()) * (L + 1), 0.0);

    for (int e = 0; e < mesh.nedges(); ++e) {
        const MeshEdge& ed = mesh.edges[e];
        const double rate = edge_transport_rate(mesh, field, e, tmid);
        for (int l = 0; l < L; ++l) {
            const double hbar = 0.5 * (cols.thickness(ed.km, l) + cols.thickness(ed.kp, l));
            vt.vcon[std::size_t(e) * L + l] = dt * hbar * rate;
        }
    }

    for (int k = 0; k < mesh.ncells(); ++k) {
        for (int I = 0; I <= L; ++I) vt.zdep[std::size_t(k) * (L + 1) + I] = cols.iface(k, I);
    }
    if (!field.has_vertical()) return vt;

    double nodes[2], wts[2];
    for (int k = 0; k < mesh.ncells(); ++k) {
        const double aq = ws.cells[k].area_q;
        for (int I = 1; I < L; ++I) {
            const InterfaceTrace tr =
                trace_interface(field, mesh.center[k], cols.iface(k, I), t, dt, ws.cfg.trace_substeps);
            vt.zdep[std::size_t(k) * (L + 1) + I] = tr.z_departure;
            double W = 0.0;
            for (const LayerOverlap& ov : layer_overlaps(cols, k, tr.z_departure, tr.z_arrival)) {
                gauss_segment(ov.z0, ov.z1, 2, nodes, wts);
                W += wts[0] * aq;
                W += wts[1] * aq;
            }
            vt.wiface[std::size_t(k) * (L + 1) + I] = W;
        }
    }
    return vt;
}

ColumnGrid advance_columns_continuity(const HorizontalMesh& mesh, const SchemeWorkspace& ws,
                                      const ColumnGrid& cols, const VolumeTransports& vt)
{
    const int L = cols.nlayers;
    ColumnGrid out = cols;
    for (int k = 0; k < mesh.ncells(); ++k) {
        const double aq = ws.cells[k].area_q;
        for (int l = 0; l < L; ++l) {
            double dvol = vt.wiface[std::size_t(k) * (L + 1) + l + 1] -
                          vt.wiface[std::size_t(k) * (L + 1) + l];
            for (int e : mesh.cell_edges[k]) {
                const double v = vt.vcon[std::size_t(e) * L + l];
                dvol -= mesh.edges[e].km == k ? v : -v;
            }
            const double hn = out.thickness(k, l) + dvol / aq;
            if (!(hn > 0.0))
                throw StateError("continuity update produced non-positive layer thickness");
            out.thickness(k, l) = hn;
        }
    }
    out.restack();
    return out;
}

ColumnGrid advance_columns_prescribed(const HorizontalMesh& mesh, const ColumnGrid& cols,
                                      const VelocityField& field, double t, double dt,
                                      int substeps)
{
    if (!field.w_r) throw ConfigError("prescribed column motion requires w_r");
    const int L = cols.nlayers;
    ColumnGrid out = cols;
    // relative_height_increment integrates w - w_r; feeding w_r as the fluid
    // velocity with a zero reference reproduces the grid-interface ODE with
    // the exact same arithmetic as the tracer-point traces. Thicknesses are
    // updated from increment differences, which keeps them bitwise unchanged
    // under rigid (height-independent) grid motion.
    VelocityField grid;
    grid.w = field.w_r;
    grid.w_r = [](const Vec3&, double, double) { return 0.0; };
    std::vector<double> disp(L + 1);
    for (int k = 0; k < mesh.ncells(); ++k) {
        for (int I = 0; I <= L; ++I) {
            disp[I] = relative_height_increment(grid, mesh.center[k], cols.iface(k, I), t, t + dt,
                                                substeps);
            out.iface(k, I) = cols.iface(k, I) + disp[I];
        }
        for (int l = 0; l < L; ++l) {
            const double hn = out.thickness(k, l) + (disp[l] - disp[l + 1]);
            if (!(hn > 0.0))
                throw StateError("prescribed column motion produced non-positive layer thickness");
            out.thickness(k, l) = hn;
        }
    }
    out.check();
    return out;
}

// --- fluxes -------------------------------------------------------------

EdgeLedger edge_flux(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const TracerField& q,
                     const ColumnGrid& cols_n, const VelocityField& field, int edge, double t,
                     double dt, const double* vcon_edge)
{
    const SchemeConfig& cfg = ws.cfg;
    const MeshEdge& ed = mesh.edges[edge];
    const int L = cols_n.nlayers;
    const int J = q.J;
    const int nh = J - 2;  // non-constant horizontal functions
    const int nm = J - 1;  // moment rows per side

    EdgeLedger ledger;
    ledger.edge = edge;
    ledger.mean.assign(L, 0.0);
    ledger.vcdg.assign(L, 0.0);
    ledger.r.assign(L, 1.0);
    ledger.mom_km.assign(std::size_t(L) * nm, 0.0);
    ledger.mom_kp.assign(std::size_t(L) * nm, 0.0);
    std::vector<double> raw(L, 0.0);

    const SweptRegion region =
        build_swept_region(mesh, edge, field, t, dt, cfg.trace_substeps);
    if (!region.lobes.empty()) {
        const std::vector<SweptPiece> pieces = intersect_swept(
            mesh, region, ws.edge_candidates[edge], cfg.partition_tol, mesh.area[region.host]);

        const bool vertical = field.has_vertical();
        double bh_src[5], bh_km[5], bh_kp[5];
        for (const SweptPiece& piece : pieces) {
            const QuadratureSet pq = polygon_quadrature(piece.poly, cfg.effective_quad_order());
            const int src = piece.src;
            const HorizontalBasis& hb_src = ws.cells[src].hb;

            // Host-frame -> source-frame offset (planar frames are parallel).
            PlanePoint off{0.0, 0.0};
            if (mesh.kind == GeometryKind::PlanarPeriodic) {
                const Vec3 d = mesh.min_image(mesh.center[region.host] - mesh.center[src]);
                off = {d.x, d.y};
            }

            for (std::size_t ip = 0; ip < pq.pts.size(); ++ip) {
                const PlanePoint p = pq.pts[ip];
                const double w2d = pq.w[ip] * piece.sign;

                PlanePoint p_src;
                Vec3 X;
                if (mesh.kind == GeometryKind::PlanarPeriodic) {
                    p_src = {p.a + off.a, p.b + off.b};
                    X = mesh.unproject(region.host, p);
                } else {
                    X = mesh.frames[region.host].plane_to_sphere(p);
                    p_src = mesh.frames[src].sphere_to_plane(X);
                }
                hb_src.eval(p_src, bh_src);

                const HorizontalPath path = trace_horizontal_path(
                    mesh.kind, mesh.R, X, t, t + dt, field, cfg.trace_substeps);
                ws.cells[ed.km].hb.eval(mesh.project(ed.km, path.end), bh_km);
                ws.cells[ed.kp].hb.eval(mesh.project(ed.kp, path.end), bh_kp);

                for (int l = 0; l < L; ++l) {
                    const double* c = q.moments(src, l);
                    double qh = c[0];
                    for (int i = 0; i < nh; ++i) qh += c[1 + i] * bh_src[i];
                    const double cz = c[J - 1];

                    const double hs = cols_n.thickness(src, l);
                    const double zms = cols_n.zmid(src, l);
                    const double wz = 0.5 * hs;

                    for (int iz = 0; iz < 2; ++iz) {
                        const double zeta = (iz == 0 ? -kInv2Sqrt3 : kInv2Sqrt3) * hs;
                        const double qv = qh + cz * (zeta / hs);
                        // Layer-relative arrival offset: horizontal transport
                        // hands a parcel to the same layer of the target
                        // column at its source offset plus any grid-relative
                        // vertical drift. A flat tracer then contributes
                        // exactly antisymmetric vertical rows.
                        const double g =
                            vertical ? trace_vertical_increment(path, zms + zeta, field) : 0.0;
                        const double bz = (zeta + g) / hs;
                        const double s = w2d * wz;
                        const double sq = s * qv;
                        ledger.vcdg[l] += s;
                        raw[l] += sq;
                        double* mk = &ledger.mom_km[std::size_t(l) * nm];
                        double* mp = &ledger.mom_kp[std::size_t(l) * nm];
                        for (int i = 0; i < nh; ++i) {
                            mk[i] += sq * bh_km[i];
                            mp[i] += sq * bh_kp[i];
                        }
                        mk[nm - 1] += sq * bz;
                        mp[nm - 1] += sq * bz;
                    }
                }
            }
        }
    }

    // Renormalize the shared mean row toward the consistent transport. The
    // compensated form mean = V_con + r (F0 - V_cdg) equals r * F0 exactly in
    // real arithmetic but returns V_con bitwise when the tracer is flat, which
    // is what keeps free-stream residuals at rounding level.
    for (int l = 0; l < L; ++l) {
        const double hbar = 0.5 * (cols_n.thickness(ed.km, l) + cols_n.thickness(ed.kp, l));
        const double vcon = vcon_edge
                                ? vcon_edge[l]
                                : dt * hbar * edge_transport_rate(mesh, field, edge, t + 0.5 * dt);
        const double volscale = ws.mean_cell_area * hbar;
        if (!cfg.renormalize || std::abs(ledger.vcdg[l]) < 1e-12 * volscale) {
            ledger.mean[l] = raw[l];
            ledger.r[l] = 1.0;
            continue;
        }
        const double r = vcon / ledger.vcdg[l];
        ledger.r[l] = r;
        ledger.mean[l] = vcon + r * (raw[l] - ledger.vcdg[l]);
        for (int j = 0; j < nm; ++j) {
            ledger.mom_km[std::size_t(l) * nm + j] *= r;
            ledger.mom_kp[std::size_t(l) * nm + j] *= r;
        }
    }
    return ledger;
}

void volume_fluxes(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const ColumnGrid& cols,
                   const VelocityField& field, int edge, double t, double dt,
                   std::vector<double>& vcon, std::vector<double>& vcdg)
{
    const int L = cols.nlayers;
    const MeshEdge& ed = mesh.edges[edge];
    const double rate = edge_transport_rate(mesh, field, edge, t + 0.5 * dt);
    vcon.assign(L, 0.0);
    vcdg.assign(L, 0.0);
    for (int l = 0; l < L; ++l)
        vcon[l] = dt * 0.5 * (cols.thickness(ed.km, l) + cols.thickness(ed.kp, l)) * rate;

    const SweptRegion region = build_swept_region(mesh, edge, field, t, dt, ws.cfg.trace_substeps);
    if (region.lobes.empty()) return;
    for (const SweptPiece& piece :
         intersect_swept(mesh, region, ws.edge_candidates[edge], ws.cfg.partition_tol,
                         mesh.area[region.host])) {
        const QuadratureSet pq = polygon_quadrature(piece.poly, ws.cfg.effective_quad_order());
        for (std::size_t ip = 0; ip < pq.pts.size(); ++ip) {
            const double w2d = pq.w[ip] * piece.sign;
            for (int l = 0; l < L; ++l) {
                const double wz = 0.5 * cols.thickness(piece.src, l);
                // two vertical Gauss nodes, matching the edge_flux accumulation
                for (int iz = 0; iz < 2; ++iz) vcdg[l] += w2d * wz;
            }
        }
    }
}

// --- full step ----------------------------------------------------------

TracerField step3d(const HorizontalMesh& mesh, const SchemeWorkspace& ws, const TracerField& q,
                   const ColumnGrid& cols_n, const ColumnGrid& cols_np1,
                   const VolumeTransports& vt, const VelocityField& field, double t, double dt)
{
    const SchemeConfig& cfg = ws.cfg;
    const int K = mesh.ncells();
    const int L = cols_n.nlayers;
    const int J = q.J;
    const int nh = J - 2;
    const int nm = J - 1;
    const bool vertical = field.has_vertical();

    TracerField out(K, L, J);
    std::vector<double>& rhs = out.c;  // accumulate the projected mass here, solve in place

    std::vector<HorizontalPath> paths;
    std::vector<double> bh_target;  // traced-arrival basis values, npts x nh
    double nodes[2], wts[2];

    for (int k = 0; k < K; ++k) {
        const CellBasisData& cb = ws.cells[k];
        const std::size_t npts = cb.quad.pts.size();

        paths.clear();
        paths.reserve(npts);
        bh_target.assign(npts * nh, 0.0);
        for (std::size_t ip = 0; ip < npts; ++ip) {
            const Vec3 x0 = mesh.unproject(k, cb.quad.pts[ip]);
            paths.push_back(
                trace_horizontal_path(mesh.kind, mesh.R, x0, t, t + dt, field, cfg.trace_substeps));
            PlanePoint parr;
            if (mesh.kind == GeometryKind::PlanarPeriodic) {
                // Arrival as start plus displacement: a stationary point keeps
                // its cached basis values bitwise.
                const Vec3 d = paths.back().end - x0;
                parr = {cb.quad.pts[ip].a + d.x, cb.quad.pts[ip].b + d.y};
            } else {
                parr = mesh.project(k, paths.back().end);
            }
            cb.hb.eval(parr, &bh_target[ip * nh]);
        }

        // Old-mass projection of every layer onto the traced test functions.
        // The vertical test value is the parcel's layer-relative offset plus
        // its grid-relative drift; a Lagrangian grid (w == w_r) reproduces
        // the source value bitwise.
        for (int l = 0; l < L; ++l) {
            const double* c = q.moments(k, l);
            const double cz = c[J - 1];
            const double hs = cols_n.thickness(k, l);
            const double zms = cols_n.zmid(k, l);
            const double wz = 0.5 * hs;
            double* row = &rhs[(std::size_t(k) * L + l) * J];

            for (std::size_t ip = 0; ip < npts; ++ip) {
                const double* bh = cb.quad_beta(ip);
                double qh = c[0];
                for (int i = 0; i < nh; ++i) qh += c[1 + i] * bh[i];
                const double w2d = cb.quad.w[ip];
                const double* bt = &bh_target[ip * nh];
                for (int iz = 0; iz < 2; ++iz) {
                    const double zeta = (iz == 0 ? -kInv2Sqrt3 : kInv2Sqrt3) * hs;
                    const double qv = qh + cz * (zeta / hs);
                    const double g =
                        vertical ? trace_vertical_increment(paths[ip], zms + zeta, field) : 0.0;
                    const double sq = w2d * wz * qv;
                    row[0] += sq;
                    for (int i = 0; i < nh; ++i) row[1 + i] += sq * bt[i];
                    row[J - 1] += sq * ((zeta + g) / hs);
                }
            }
        }

        // Vertical interface fluxes within the column, reusing the same
        // horizontal paths. Positive transport is upward: the layer above
        // gains, the layer below loses.
        if (vertical && L > 1) {
            for (int I = 1; I < L; ++I) {
                const double zdep = vt.zdep[std::size_t(k) * (L + 1) + I];
                const double zarr = cols_n.iface(k, I);
                if (zdep == zarr) continue;
                double* above = &rhs[(std::size_t(k) * L + (I - 1)) * J];
                double* below = &rhs[(std::size_t(k) * L + I) * J];
                // Transported mass lands at the interface's grid-relative
                // displacement inside the receiving (and donating) layers;
                // both charts use time-n geometry to match the old-mass rows.
                const double gI = zarr - zdep;
                const double zmA = cols_n.zmid(k, I - 1);
                const double hA = cols_n.thickness(k, I - 1);
                const double zmB = cols_n.zmid(k, I);
                const double hB = cols_n.thickness(k, I);

                for (const LayerOverlap& ov : layer_overlaps(cols_n, k, zdep, zarr)) {
                    const double* c = q.moments(k, ov.layer);
                    const double cz = c[J - 1];
                    const double hs = cols_n.thickness(k, ov.layer);
                    const double zms = cols_n.zmid(k, ov.layer);
                    gauss_segment(ov.z0, ov.z1, 2, nodes, wts);
                    for (int iz = 0; iz < 2; ++iz) {
                        const double zn = nodes[iz];
                        const double wz = wts[iz];
                        // Sum the horizontal quadrature first, then weight by
                        // the signed segment measure: the mean row then matches
                        // the interface volume budget term for term.
                        double S0 = 0.0;
                        double Sh[5] = {0, 0, 0, 0, 0};
                        double SzA = 0.0, SzB = 0.0;
                        for (std::size_t ip = 0; ip < npts; ++ip) {
                            const double* bh = cb.quad_beta(ip);
                            double qv = c[0];
                            for (int i = 0; i < nh; ++i) qv += c[1 + i] * bh[i];
                            qv += cz * ((zn - zms) / hs);
                            const double wq = cb.quad.w[ip] * qv;
                            S0 += wq;
                            const double* bt = &bh_target[ip * nh];
                            for (int i = 0; i < nh; ++i) Sh[i] += wq * bt[i];
                            SzA += wq * (((zn - zmA) + gI) / hA);
                            SzB += wq * (((zn - zmB) + gI) / hB);
                        }
                        const double F0 = wz * S0;
                        above[0] += F0;
                        below[0] -= F0;
                        for (int i = 0; i < nh; ++i) {
                            above[1 + i] += wz * Sh[i];
                            below[1 + i] -= wz * Sh[i];
                        }
                        above[J - 1] += wz * SzA;
                        below[J - 1] -= wz * SzB;
                    }
                }
            }
        }
    }

    // Horizontal edge fluxes.
    for (int e = 0; e < mesh.nedges(); ++e) {
        const MeshEdge& ed = mesh.edges[e];
        const EdgeLedger ledger =
            edge_flux(mesh, ws, q, cols_n, field, e, t, dt, &vt.vcon[std::size_t(e) * L]);
        for (int l = 0; l < L; ++l) {
            double* rm = &rhs[(std::size_t(ed.km) * L + l) * J];
            double* rp = &rhs[(std::size_t(ed.kp) * L + l) * J];
            rm[0] -= ledger.mean[l];
            rp[0] += ledger.mean[l];
            for (int j = 0; j < nm; ++j) {
                rm[1 + j] -= ledger.mom_km[std::size_t(l) * nm + j];
                rp[1 + j] += ledger.mom_kp[std::size_t(l) * nm + j];
            }
        }
    }

    // Per-element solves on the advanced geometry.
    std::vector<double> sol(J);
    for (int k = 0; k < K; ++k) {
        const CellBasisData& cb = ws.cells[k];
        for (int l = 0; l < L; ++l) {
            ElementMatrix M = mass_matrix(cb.hb, cb.gram.data(), cb.area_q, cols_np1.thickness(k, l));
            double* row = &rhs[(std::size_t(k) * L + l) * J];
            M.solve(row, sol.data());
            for (int j = 0; j < J; ++j) row[j] = sol[j];
        }
    }

    apply_limiter(cfg.limiter, mesh, ws.cells, cols_np1, out);
    return out;
}

} // namespace cdg
