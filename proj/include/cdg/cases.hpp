#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cdg/mesh.hpp"
#include "cdg/transport.hpp"
#include "cdg/velocity.hpp"

namespace cdg {

/// How the layer grid advances each step.
enum class ColumnMode {
    Static,      // interfaces fixed; relative vertical fluxes only
    Continuity,  // thickness follows the volume budget (ssh absorbs the net)
    Prescribed   // interfaces move with the grid velocity w_r
};

/// A fully specified run: mesh, columns, flow, initial tracer, stepping.
struct CaseSpec {
    std::string name;

    // mesh
    std::string mesh_kind = "hex";  // "hex" | "icos"
    int nx = 16, ny = 4;
    double dx = 1000.0;
    int level = 3;
    double radius = 6.37122e6;
    std::shared_ptr<const HorizontalMesh> prebuilt;  // set when a factory already built it

    // columns
    int nlayers = 1;
    double depth = 100.0;
    std::function<double(const Vec3&)> ssh;  // initial surface offset, may be empty
    ColumnMode columns = ColumnMode::Static;

    // physics
    VelocityField velocity;
    std::function<double(const Vec3&, double)> initial;              // q0(x, z)
    std::function<double(const Vec3&, double, double)> reference;    // q_ref(x, z, t), may be empty
    bool density_diagnostics = false;

    // stepping
    SchemeConfig scheme;
    double dt = 600.0;
    int n_steps = 100;
    int diagnostics_every = 1;
    std::vector<int> snapshots_at;
};

/// Nondivergent, time-reversing deformational flow on the sphere with a
/// Gaussian initial tracer. The flow undoes itself over T = 12 days, so the
/// exact solution at t = T is the initial condition. dt_s = 0 picks the
/// default T / (120 * 2^(level-3)); kappa = 0 picks the default peak speed
/// 10 R / T.
CaseSpec case_deformational_sphere(int level, double dt_s = 0.0, double kappa = 0.0);

/// Rigid rotation ("sphere": about the polar axis; "plane": uniform
/// translation) advecting a cosine bell. cfl sets the time step from the
/// minimum cell spacing; cfl = 0 is the resting variant (u = 0).
CaseSpec case_solid_body(const std::string& domain, double cfl, int level = 3);

/// Single-column vertical profiles on a minimal planar mesh with u = 0:
///   'a'  Lagrangian heave: w = w_r oscillating, grid follows the fluid
///   'b'  fixed grid: w_r = 0, constant upward w through a step profile
///   'c'  combined: oscillating grid stretch plus constant relative transport
/// nlayers = 0 picks the per-profile default.
CaseSpec case_vertical_column(int nlayers, char profile);

/// Periodic x-z channel with a reversing overturning stream function, layers
/// stretched by an initial ssh perturbation and advanced by continuity.
/// Lock-exchange-like temperature tracer in [5, 30] C, partially Lagrangian
/// grid (w_r = w/2), density diagnostics on.
CaseSpec case_xz_slice(int nx = 0, int nlayers = 0);

/// Free-stream variant of the x-z channel: q = 1, fully Lagrangian vertical
/// grid (w_r = w), continuity thickness.
CaseSpec case_xz_freestream(int nx = 0, int nlayers = 0);

/// Shipped-case registry used by the CLI and the config loader.
CaseSpec make_case(const std::string& name);
std::vector<std::string> case_names();

} // namespace cdg
