#include "cdg/vertical.hpp"

#include <algorithm>
#include <cmath>

#include "cdg/errors.hpp"

namespace cdg {

double relative_height_increment(const VelocityField& field, const Vec3& x, double z0,
                                 double t_from, double t_to, int substeps)
{
    if (substeps < 1) throw ConfigError("relative_height_increment: substeps must be >= 1");
    auto rhs = [&](double dzz, double t) { return field.w(x, z0 + dzz, t) - field.w_r(x, z0 + dzz, t); };
    const double dt = (t_to - t_from) / substeps;
    double dz = 0.0;
    double t = t_from;
    for (int s = 0; s < substeps; ++s) {
        const double k1 = rhs(dz, t);
        const double k2 = rhs(dz + 0.5 * dt * k1, t + 0.5 * dt);
        const double k3 = rhs(dz + 0.5 * dt * k2, t + 0.5 * dt);
        const double k4 = rhs(dz + dt * k3, t + dt);
        dz += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t = t_from + (s + 1) * dt;
    }
    return dz;
}

double trace_relative_height(const VelocityField& field, const Vec3& x, double z0, double t_from,
                             double t_to, int substeps)
{
    return z0 + relative_height_increment(field, x, z0, t_from, t_to, substeps);
}

InterfaceTrace trace_interface(const VelocityField& field, const Vec3& x, double z_iface, double t,
                               double dt, int substeps)
{
    InterfaceTrace tr;
    tr.z_arrival = z_iface;
    tr.z_departure = trace_relative_height(field, x, z_iface, t + dt, t, substeps);
    return tr;
}

std::vector<LayerOverlap> layer_overlaps(const ColumnGrid& cols, int k, double z_departure,
                                         double z_arrival)
{
    std::vector<LayerOverlap> out;
    if (z_departure == z_arrival) return out;

    const int L = cols.nlayers;
    const double ztop = cols.iface(k, 0);
    const double zbot = cols.iface(k, L);
    const double slack = 1e-10 * (ztop - zbot);
    const double lo = std::min(z_departure, z_arrival);
    const double hi = std::max(z_departure, z_arrival);
    if (lo < zbot - slack || hi > ztop + slack)
        throw StateError("vertical trace segment leaves the column (CFL or boundary violation)");

    // Clip against each layer [iface(l+1), iface(l)], then orient the pieces
    // along departure -> arrival.
    const bool upward = z_arrival > z_departure;
    for (int l = 0; l < L; ++l) {
        const double top = cols.iface(k, l);
        const double bot = cols.iface(k, l + 1);
        const double a = std::max(lo, bot);
        const double b = std::min(hi, top);
        if (b <= a) continue;
        LayerOverlap ov;
        ov.layer = l;
        if (upward) {
            ov.z0 = a;
            ov.z1 = b;
        } else {
            ov.z0 = b;
            ov.z1 = a;
        }
        out.push_back(ov);
    }
    // Pieces were produced top-down per layer index; for upward segments the
    // traversal runs bottom-up, so reverse to keep them ordered along the
    // segment.
    if (upward) std::reverse(out.begin(), out.end());
    return out;
}

} // namespace cdg
