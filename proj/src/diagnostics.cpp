#include "cdg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cdg {

namespace {
constexpr double kGravity = 9.80616;
} // namespace

double total_tracer_mass(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                         const TracerField& q)
{
    double m = 0.0;
    for (int k = 0; k < q.ncells; ++k) {
        const double area = cells[k].area_q;
        for (int l = 0; l < q.nlayers; ++l) m += q.at(k, l, 0) * area * cols.thickness(k, l);
    }
    return m;
}

FieldRange corner_range(const std::vector<CellBasisData>& cells, const TracerField& q)
{
    FieldRange r;
    r.lo = std::numeric_limits<double>::infinity();
    r.hi = -r.lo;
    for (int k = 0; k < q.ncells; ++k) {
        const CellBasisData& cb = cells[k];
        const int nh = cb.hb.nfuncs();
        for (int l = 0; l < q.nlayers; ++l) {
            const double* c = q.moments(k, l);
            const double cz = c[q.J - 1];
            for (int iv = 0; iv < cb.ncorners; ++iv) {
                const double* b = cb.corner_beta(iv);
                double qh = c[0];
                for (int i = 0; i < nh; ++i) qh += c[1 + i] * b[i];
                r.lo = std::min(r.lo, qh - 0.5 * std::abs(cz));
                r.hi = std::max(r.hi, qh + 0.5 * std::abs(cz));
            }
        }
    }
    return r;
}

double l2_error(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                const ColumnGrid& cols, const TracerField& q,
                const std::function<double(const Vec3&, double, double)>& ref, double t)
{
    const double inv2s3 = 0.5 / std::sqrt(3.0);
    double num = 0.0, den = 0.0;
    for (int k = 0; k < q.ncells; ++k) {
        const CellBasisData& cb = cells[k];
        const int nh = cb.hb.nfuncs();
        for (int l = 0; l < q.nlayers; ++l) {
            const double h = cols.thickness(k, l);
            const double zm = cols.zmid(k, l);
            const double* c = q.moments(k, l);
            const double cz = c[q.J - 1];
            for (std::size_t ip = 0; ip < cb.quad.pts.size(); ++ip) {
                const Vec3 xg = mesh.unproject(k, cb.quad.pts[ip]);
                const double* b = cb.quad_beta(int(ip));
                double qh = c[0];
                for (int i = 0; i < nh; ++i) qh += c[1 + i] * b[i];
                const double wv = cb.quad.w[ip] * 0.5 * h;
                for (int iz = 0; iz < 2; ++iz) {
                    const double zeta = (iz == 0 ? -1.0 : 1.0) * inv2s3 * h;
                    const double qv = qh + cz * (zeta / h);
                    const double rv = ref(xg, zm + zeta, t);
                    num += wv * (qv - rv) * (qv - rv);
                    den += wv * rv * rv;
                }
            }
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double rpe(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
           const std::vector<double>& density)
{
    struct Slab {
        double rho, vol;
    };
    std::vector<Slab> slabs;
    slabs.reserve(density.size());
    double area_total = 0.0, vol_total = 0.0;
    for (int k = 0; k < cols.ncells; ++k) {
        const double area = cells[k].area_q;
        area_total += area;
        for (int l = 0; l < cols.nlayers; ++l) {
            const double vol = area * cols.thickness(k, l);
            vol_total += vol;
            slabs.push_back({density[std::size_t(k) * cols.nlayers + l], vol});
        }
    }
    // Densest slab at the bottom. The volume tie-break keeps the result
    // independent of the caller's element order even through an unstable
    // sort; equal (rho, vol) slabs are interchangeable.
    std::sort(slabs.begin(), slabs.end(), [](const Slab& a, const Slab& b) {
        if (a.rho != b.rho) return a.rho > b.rho;
        return a.vol > b.vol;
    });
    double z = -vol_total / area_total;
    double energy = 0.0;
    for (const Slab& s : slabs) {
        const double z_top = z + s.vol / area_total;
        energy += kGravity * s.rho * area_total * 0.5 * (z_top * z_top - z * z);
        z = z_top;
    }
    return energy;
}

double rpe_of_temperature(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                          const TracerField& q)
{
    std::vector<double> density(std::size_t(q.ncells) * q.nlayers);
    for (int k = 0; k < q.ncells; ++k)
        for (int l = 0; l < q.nlayers; ++l)
            density[std::size_t(k) * q.nlayers + l] = eos_density(q.at(k, l, 0));
    return rpe(cells, cols, density);
}

} // namespace cdg
