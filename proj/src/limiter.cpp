#include "cdg/limiter.hpp"

#include <algorithm>
#include <cmath>

#include "cdg/errors.hpp"

namespace cdg {

void barth_jespersen_3d(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                        TracerField& q)
{
    const int L = q.nlayers;
    const int J = q.J;
    const int nh = J - 2;

    for (int k = 0; k < q.ncells; ++k) {
        const CellBasisData& cb = cells[k];
        for (int l = 0; l < L; ++l) {
            double* c = q.moments(k, l);
            const double mean = c[0];

            double qmin = mean, qmax = mean;
            for (int nb : mesh.vertex_neighbors[k]) {
                const double m = q.at(nb, l, 0);
                qmin = std::min(qmin, m);
                qmax = std::max(qmax, m);
            }
            if (l > 0) {
                const double m = q.at(k, l - 1, 0);
                qmin = std::min(qmin, m);
                qmax = std::max(qmax, m);
            }
            if (l + 1 < L) {
                const double m = q.at(k, l + 1, 0);
                qmin = std::min(qmin, m);
                qmax = std::max(qmax, m);
            }

            // One alpha over the polygon corners at the layer top and bottom
            // (vertical basis value -+1/2 there regardless of thickness).
            double alpha = 1.0;
            for (int iv = 0; iv < cb.ncorners; ++iv) {
                const double* bh = cb.corner_beta(iv);
                double dh = 0.0;
                for (int i = 0; i < nh; ++i) dh += c[1 + i] * bh[i];
                for (int sz = -1; sz <= 1; sz += 2) {
                    const double delta = dh + 0.5 * sz * c[J - 1];
                    if (delta == 0.0) continue;
                    const double bound = delta > 0.0 ? qmax : qmin;
                    const double ratio = (bound - mean) / delta;
                    if (ratio < alpha) alpha = std::max(ratio, 0.0);
                }
            }

            // Snap to 1 against rounding so the limiter is exactly idempotent.
            if (alpha > 1.0 - 1e-12) continue;
            for (int j = 1; j < J; ++j) c[j] *= alpha;
        }
    }
}

void weno_blend_3d(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                   const ColumnGrid& cols, TracerField& q)
{
    const int L = q.nlayers;
    const int J = q.J;
    if (J != 4)
        throw ConfigError("the WENO blend is implemented for the linear basis only");

    const TracerField in = q;
    for (int k = 0; k < q.ncells; ++k) {
        const HorizontalBasis& hb = cells[k].hb;
        for (int l = 0; l < L; ++l) {
            const double hk = cols.thickness(k, l);

            // Candidate moment triples (c1, c2, c3) about this element's own
            // mean: its own moments plus every neighbor's reconstruction
            // re-expanded in this element's frame and scaling.
            double blend[3] = {0.0, 0.0, 0.0};
            double wsum = 0.0;
            const double mean = in.at(k, l, 0);
            const double eps = 1e-12 * mean * mean + 1e-300;

            auto add_candidate = [&](double c1, double c2, double c3) {
                const double si = c1 * c1 + c2 * c2 + c3 * c3;
                const double w = 1.0 / ((eps + si) * (eps + si));
                blend[0] += w * c1;
                blend[1] += w * c2;
                blend[2] += w * c3;
                wsum += w;
            };

            add_candidate(in.at(k, l, 1), in.at(k, l, 2), in.at(k, l, 3));
            for (int e : mesh.cell_edges[k]) {
                const MeshEdge& ed = mesh.edges[e];
                const int nb = ed.km == k ? ed.kp : ed.km;
                const HorizontalBasis& hn = cells[nb].hb;
                // Neighbor gradient in its own frame, rotated into ours.
                const double gx = in.at(nb, l, 1) / hn.dx;
                const double gy = in.at(nb, l, 2) / hn.dy;
                double rx = gx, ry = gy;
                if (mesh.kind == GeometryKind::Sphere) {
                    const TangentFrame& fk = mesh.frames[k];
                    const TangentFrame& fn = mesh.frames[nb];
                    rx = dot(fk.ea, fn.ea) * gx + dot(fk.ea, fn.eb) * gy;
                    ry = dot(fk.eb, fn.ea) * gx + dot(fk.eb, fn.eb) * gy;
                }
                const double c3 = in.at(nb, l, 3) / cols.thickness(nb, l) * hk;
                add_candidate(rx * hb.dx, ry * hb.dy, c3);
            }
            for (int dl = -1; dl <= 1; dl += 2) {
                const int ll = l + dl;
                if (ll < 0 || ll >= L) continue;
                const double c3 = in.at(k, ll, 3) / cols.thickness(k, ll) * hk;
                add_candidate(in.at(k, ll, 1), in.at(k, ll, 2), c3);
            }

            for (int j = 0; j < 3; ++j) q.at(k, l, 1 + j) = blend[j] / wsum;
        }
    }
}

void apply_limiter(LimiterKind kind, const HorizontalMesh& mesh,
                   const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                   TracerField& q)
{
    switch (kind) {
    case LimiterKind::None: return;
    case LimiterKind::BarthJespersen: barth_jespersen_3d(mesh, cells, q); return;
    case LimiterKind::Weno: weno_blend_3d(mesh, cells, cols, q); return;
    }
    throw ConfigError("unknown limiter kind");
}

} // namespace cdg
