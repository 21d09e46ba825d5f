#pragma once

#include <functional>

#include "cdg/geom.hpp"

namespace cdg {

/// Prescribed analytic velocity field.
///
/// u(x, t): horizontal velocity at a surface position (tangent to the sphere,
///          or with zero z-component on the plane). Independent of depth.
/// w(x, z, t), w_r(x, z, t): vertical fluid and grid velocities. Either both
///          are set or both are empty (purely horizontal flow).
/// edge_transport(A, B, t): optional exact instantaneous volume flux per unit
///          thickness across the segment/geodesic A->B, positive to the right
///          of the direction of travel (for a stream function psi with
///          u = up x grad(psi), this is psi(A) - psi(B)). When present it
///          replaces the midpoint u.n quadrature in the continuity budget.
struct VelocityField {
    std::function<Vec3(const Vec3&, double)> u;
    std::function<double(const Vec3&, double, double)> w;
    std::function<double(const Vec3&, double, double)> w_r;
    std::function<double(const Vec3&, const Vec3&, double)> edge_transport;

    bool has_vertical() const { return bool(w); }
};

} // namespace cdg
