#pragma once

#include <vector>

#include "cdg/column.hpp"
#include "cdg/geom.hpp"
#include "cdg/velocity.hpp"

namespace cdg {

/// RK4 increment of dz/dt = w(x, z, t) - w_r(x, z, t) at fixed horizontal
/// position; t_to < t_from integrates backward. The increment is accumulated
/// separately from z so that for height-independent velocities it is bitwise
/// identical for every starting height - the moving-grid identities rely on
/// that.
double relative_height_increment(const VelocityField& field, const Vec3& x, double z0,
                                 double t_from, double t_to, int substeps);

/// Departure/arrival height of the same ODE: z0 plus the increment.
double trace_relative_height(const VelocityField& field, const Vec3& x, double z0, double t_from,
                             double t_to, int substeps);

/// One column interface traced backward over a step: the interface sits at
/// z_arrival (its time-n height) at the end of the step, and the fluid that
/// crosses it during the step occupies [z_departure, z_arrival] at time n.
struct InterfaceTrace {
    double z_arrival = 0.0;
    double z_departure = 0.0;
};

InterfaceTrace trace_interface(const VelocityField& field, const Vec3& x, double z_iface, double t,
                               double dt, int substeps);

/// One piece of the oriented segment [z_departure, z_arrival] clipped against
/// a single layer of the column. z0 -> z1 preserves the segment orientation,
/// so z1 < z0 (and hence negative quadrature weights) means downward
/// transport.
struct LayerOverlap {
    int layer = -1;
    double z0 = 0.0;
    double z1 = 0.0;
};

/// Clip the oriented segment [z_departure, z_arrival] against the layers of
/// column k. Throws StateError if the segment reaches outside the column
/// (vertical CFL violation / boundary crossing) beyond a small relative
/// slack.
std::vector<LayerOverlap> layer_overlaps(const ColumnGrid& cols, int k, double z_departure,
                                         double z_arrival);

} // namespace cdg
