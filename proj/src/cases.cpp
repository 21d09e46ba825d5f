#include "cdg/cases.hpp"

#include "cdg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cdg {

namespace {

constexpr double kEarthRadius = 6.37122e6;
constexpr double kDay = 86400.0;

/// Cosine bell of radius r0 over base/peak values, as a function of distance.
double cosine_bell(double r, double r0, double base, double peak)
{
    if (r >= r0)
        return base;
    return base + 0.5 * (peak - base) * (1.0 + std::cos(M_PI * r / r0));
}

}  // namespace

CaseSpec case_deformational_sphere(int level, double dt_s, double kappa)
{
    CaseSpec cs;
    cs.name = "deformational_sphere";
    cs.mesh_kind = "icos";
    cs.level = level;
    cs.radius = kEarthRadius;
    cs.nlayers = 1;
    cs.depth = 100.0;
    cs.columns = ColumnMode::Static;

    const double R = kEarthRadius;
    const double T = 12.0 * kDay;
    if (kappa == 0.0)
        kappa = 10.0 * R / T;
    const double kap = kappa;

    // Reversing shear flow from the Cartesian stream function
    //   psi(x, t) = (kappa / R) y^2 cos(pi t / T),
    // whose surface velocity u = grad(psi) x n is exactly tangent and
    // divergence-free, and retraces itself over [0, T].
    cs.velocity.u = [kap, R, T](const Vec3& x, double t) {
        const double s = 2.0 * kap * x.y * std::cos(M_PI * t / T) / (R * R);
        return Vec3{-s * x.z, 0.0, s * x.x};
    };
    cs.velocity.edge_transport = [kap, R, T](const Vec3& a, const Vec3& b, double t) {
        return (kap * std::cos(M_PI * t / T) / R) * (a.y * a.y - b.y * b.y);
    };

    // Broad enough that the coarsest verification level already sits in the
    // asymptotic convergence range of the linear basis.
    const Vec3 x0 = (R / std::sqrt(2.0)) * Vec3{1.0, 0.0, 1.0};
    auto hill = [R, x0](const Vec3& x, double) {
        const Vec3 d = x - x0;
        return 0.05 + 0.95 * std::exp(-1.5 * d.dot(d) / (R * R));
    };
    cs.initial = hill;
    // The flow reverses, so the exact end state is the initial one.
    cs.reference = [hill](const Vec3& x, double z, double) { return hill(x, z); };

    const int n = (dt_s > 0.0) ? static_cast<int>(std::lround(T / dt_s))
                               : 120 << std::max(0, level - 3);
    cs.n_steps = n;
    cs.dt = T / n;
    return cs;
}

CaseSpec case_solid_body(const std::string& domain, double cfl, int level)
{
    CaseSpec cs;
    cs.nlayers = 1;
    cs.depth = 100.0;
    cs.columns = ColumnMode::Static;

    if (domain == "sphere") {
        cs.name = cfl > 0.0 ? "solid_body" : "solid_body_rest";
        cs.mesh_kind = "icos";
        cs.level = level;
        cs.radius = kEarthRadius;
        cs.prebuilt = std::make_shared<HorizontalMesh>(
            build_icosahedral_mesh(level, kEarthRadius));

        const double R = kEarthRadius;
        const double omega = 2.0 * M_PI / kDay;
        cs.velocity.u = [omega](const Vec3& x, double) {
            return Vec3{-omega * x.y, omega * x.x, 0.0};
        };
        // Stream function psi = -omega R z, so the transport across a -> b is
        // psi(a) - psi(b).
        cs.velocity.edge_transport = [omega, R](const Vec3& a, const Vec3& b, double) {
            return -omega * R * (a.z - b.z);
        };

        const Vec3 c0{R, 0.0, 0.0};
        auto bell = [R, c0](const Vec3& x, double) {
            const double c = std::clamp(dot(x, c0) / (R * R), -1.0, 1.0);
            return cosine_bell(R * std::acos(c), R / 3.0, 0.05, 1.0);
        };
        cs.initial = bell;
        cs.reference = [bell, omega](const Vec3& x, double z, double t) {
            const double ca = std::cos(omega * t), sa = std::sin(omega * t);
            return bell(Vec3{ca * x.x + sa * x.y, -sa * x.x + ca * x.y, x.z}, z);
        };

        if (cfl > 0.0) {
            const double target = cfl * cs.prebuilt->min_spacing() / (omega * R);
            const int per_rev = static_cast<int>(std::floor(kDay / target));
            cs.dt = kDay / per_rev;
            cs.n_steps = 10 * per_rev;
        } else {
            // Rest state: same tracer, no motion; the field must stay put.
            cs.velocity.u = [](const Vec3&, double) { return Vec3{0.0, 0.0, 0.0}; };
            cs.velocity.edge_transport = [](const Vec3&, const Vec3&, double) {
                return 0.0;
            };
            cs.reference = [bell](const Vec3& x, double z, double) { return bell(x, z); };
            cs.dt = 3600.0;
            cs.n_steps = 50;
        }
        return cs;
    }

    if (domain == "plane") {
        cs.name = "solid_body_plane";
        cs.mesh_kind = "hex";
        cs.nx = 16;
        cs.ny = 8;
        cs.dx = 1000.0;
        cs.prebuilt = std::make_shared<HorizontalMesh>(
            build_planar_hex_mesh(cs.nx, cs.ny, cs.dx));
        auto mesh = cs.prebuilt;

        const Vec3 u0{1.0, 0.5, 0.0};
        cs.velocity.u = [u0](const Vec3&, double) { return u0; };
        // Linear stream function psi = u0.y x - u0.x y, differenced over the
        // minimum-image segment so seam edges see the short way around.
        cs.velocity.edge_transport = [u0, mesh](const Vec3& a, const Vec3& b, double) {
            const Vec3 d = mesh->min_image(b - a);
            return u0.x * d.y - u0.y * d.x;
        };

        const Vec3 c0{0.5 * mesh->Lx, 0.5 * mesh->Ly, 0.0};
        const double r0 = mesh->Lx / 6.0;
        auto bell = [mesh, c0, r0](const Vec3& x, double) {
            return cosine_bell(mesh->min_image(x - c0).norm(), r0, 0.05, 1.0);
        };
        cs.initial = bell;
        cs.reference = [bell, u0](const Vec3& x, double z, double t) {
            return bell(x - u0 * t, z);
        };

        const double speed = u0.norm();
        cs.dt = (cfl > 0.0 ? cfl : 0.8) * mesh->min_spacing() / speed;
        cs.n_steps = static_cast<int>(std::lround(mesh->Lx / (u0.x * cs.dt)));
        return cs;
    }

    throw ConfigError("case_solid_body: unknown domain '" + domain + "'");
}

CaseSpec case_vertical_column(int nlayers, char profile)
{
    CaseSpec cs;
    cs.mesh_kind = "hex";
    cs.nx = 3;
    cs.ny = 4;
    cs.dx = 1000.0;
    cs.velocity.u = [](const Vec3&, double) { return Vec3{0.0, 0.0, 0.0}; };
    cs.velocity.edge_transport = [](const Vec3&, const Vec3&, double) { return 0.0; };

    if (profile == 'a') {
        // Rigid heave: the whole column rides w_r = w, so layer thicknesses
        // and tracer coefficients are exactly steady.
        cs.name = "vertical_a";
        cs.nlayers = nlayers > 0 ? nlayers : 10;
        cs.depth = 500.0;
        cs.columns = ColumnMode::Prescribed;
        const double W0 = 0.05;
        const double om = 2.0 * M_PI / 3000.0;
        auto heave = [W0, om](const Vec3&, double, double t) {
            return W0 * std::cos(om * t);
        };
        cs.velocity.w = heave;
        cs.velocity.w_r = heave;
        const double D = cs.depth;
        cs.initial = [D](const Vec3& x, double z) {
            return 10.0 + 5.0 * std::cos(M_PI * z / D) +
                   2.0 * std::cos(2.0 * M_PI * x.x / 3000.0);
        };
        cs.dt = 60.0;
        cs.n_steps = 1000;
        return cs;
    }

    if (profile == 'b') {
        // Fixed grid, constant upward transport: a layer-aligned step of
        // tracer crosses interfaces while the interfaces stay put.
        cs.name = "vertical_b";
        cs.nlayers = nlayers > 0 ? nlayers : 20;
        cs.depth = 1000.0;
        cs.columns = ColumnMode::Static;
        const double w0 = 5.0e-4;
        cs.velocity.w = [w0](const Vec3&, double, double) { return w0; };
        cs.velocity.w_r = [](const Vec3&, double, double) { return 0.0; };
        auto step = [](double z) { return (z > -650.0 && z < -350.0) ? 1.0 : 0.0; };
        cs.initial = [step](const Vec3&, double z) { return step(z); };
        cs.reference = [step, w0](const Vec3&, double z, double t) {
            return step(z - w0 * t);
        };
        cs.dt = 600.0;
        cs.n_steps = 100;
        return cs;
    }

    if (profile == 'c') {
        // Breathing grid with a slight tracer slip: interfaces stretch with
        // w_r while the tracer drifts upward through them at a constant rate.
        cs.name = "vertical_c";
        cs.nlayers = nlayers > 0 ? nlayers : 10;
        cs.depth = 500.0;
        cs.columns = ColumnMode::Prescribed;
        const double D = cs.depth;
        const double s0 = 0.02;
        const double om = 2.0 * M_PI / 6000.0;
        auto stretch = [s0, om, D](const Vec3&, double z, double t) {
            return s0 * std::cos(om * t) * (z + D) / D;
        };
        cs.velocity.w_r = stretch;
        cs.velocity.w = [stretch](const Vec3& x, double z, double t) {
            return stretch(x, z, t) + 1.0e-4;
        };
        cs.initial = [D](const Vec3&, double z) {
            return 10.0 + 5.0 * std::cos(M_PI * z / D);
        };
        cs.dt = 300.0;
        cs.n_steps = 200;
        return cs;
    }

    throw ConfigError(std::string("case_vertical_column: unknown profile '") +
                      profile + "'");
}

namespace {

/// Shared construction for the oscillating x-z slice cases.
CaseSpec xz_base(int nx, int nlayers)
{
    CaseSpec cs;
    cs.mesh_kind = "hex";
    cs.nx = nx > 0 ? nx : 16;
    cs.ny = 4;
    cs.dx = 1000.0;
    cs.nlayers = nlayers > 0 ? nlayers : 10;
    cs.depth = 1000.0;
    cs.columns = ColumnMode::Continuity;
    cs.prebuilt = std::make_shared<HorizontalMesh>(
        build_planar_hex_mesh(cs.nx, cs.ny, cs.dx));
    auto mesh = cs.prebuilt;

    const double Lx = cs.nx * cs.dx;
    const double U1 = 0.4;   // nondivergent mean stream along the channel
    const double U2 = 0.05;  // divergent seiche mode
    const double kx = 2.0 * M_PI / Lx;
    const double om = 2.0 * M_PI / 7200.0;
    const double D = cs.depth;

    // Mean stream plus an oscillating convergence pattern, closed in x-z by
    // w = -(z + D) du/dx: divergence-free in the slice, no flow through the
    // flat bottom, and a seiche-like free surface whose amplitude
    // U2 k D / om stays a small fraction of the depth. The column-uniform u
    // is what the horizontal characteristics assume; the continuity solve
    // turns the divergent part into interface motion and ssh stretch.
    cs.velocity.u = [U1, U2, kx, om](const Vec3& x, double t) {
        return Vec3{U1 + U2 * std::sin(kx * x.x) * std::cos(om * t), 0.0, 0.0};
    };
    auto wfun = [U2, kx, om, D](const Vec3& x, double z, double t) {
        return -U2 * (z + D) * kx * std::cos(kx * x.x) * std::cos(om * t);
    };
    cs.velocity.w = wfun;
    cs.velocity.w_r = [wfun](const Vec3& x, double z, double t) {
        return 0.5 * wfun(x, z, t);
    };

    // Exact edge-mean of u.n: u depends on x only, so integrate analytically.
    // Stored edge endpoints may sit a full box apart across a seam, so the
    // segment is taken the short way around, a -> a + d.
    cs.velocity.edge_transport = [U1, U2, kx, om, mesh](const Vec3& a, const Vec3& b,
                                                        double t) {
        const Vec3 d = mesh->min_image(b - a);
        double avg;
        if (std::abs(d.x) < 1.0e-9)
            avg = std::sin(kx * (a.x + 0.5 * d.x));
        else
            avg = (std::cos(kx * a.x) - std::cos(kx * (a.x + d.x))) / (kx * d.x);
        // Positive-to-the-right of a -> b means the outward component rotates
        // the segment direction by -90 degrees: n ds = (dy, -dx).
        return (U1 + U2 * std::cos(om * t) * avg) * d.y;
    };

    cs.ssh = [kx](const Vec3& x) { return 5.0 * std::sin(kx * x.x); };
    cs.dt = 600.0;
    return cs;
}

}  // namespace

CaseSpec case_xz_slice(int nx, int nlayers)
{
    CaseSpec cs = xz_base(nx, nlayers);
    cs.name = "xz_slice";

    const double Lx = cs.nx * cs.dx;
    const double kx = 2.0 * M_PI / Lx;
    const double D = cs.depth;
    // Warm above cold with a gentle phase ripple; the range stays inside
    // [5, 30] C because the ripple only shifts the cosine's argument.
    cs.initial = [kx, D](const Vec3& x, double z) {
        return 17.5 - 12.5 * std::cos(M_PI * (z + D) / D + 0.2 * std::sin(kx * x.x));
    };
    cs.density_diagnostics = true;
    cs.n_steps = 108;
    return cs;
}

CaseSpec case_xz_freestream(int nx, int nlayers)
{
    CaseSpec cs = xz_base(nx, nlayers);
    cs.name = "xz_freestream";
    // Grid follows the full vertical motion, tracer is uniform: every
    // coefficient should stay at the constant state.
    cs.velocity.w_r = cs.velocity.w;
    cs.initial = [](const Vec3&, double) { return 1.0; };
    cs.reference = [](const Vec3&, double, double) { return 1.0; };
    cs.n_steps = 100;
    return cs;
}

CaseSpec make_case(const std::string& name)
{
    if (name == "deformational_sphere")
        return case_deformational_sphere(3);
    if (name == "solid_body")
        return case_solid_body("sphere", 1.5);
    if (name == "solid_body_rest")
        return case_solid_body("sphere", 0.0);
    if (name == "vertical_a")
        return case_vertical_column(0, 'a');
    if (name == "vertical_b")
        return case_vertical_column(0, 'b');
    if (name == "vertical_c")
        return case_vertical_column(0, 'c');
    if (name == "xz_slice")
        return case_xz_slice();
    if (name == "xz_freestream")
        return case_xz_freestream();

    std::string known;
    for (const auto& n : case_names())
        known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown case '" + name + "' (known: " + known + ")");
}

std::vector<std::string> case_names()
{
    return {"deformational_sphere", "solid_body", "solid_body_rest",
            "vertical_a",           "vertical_b", "vertical_c",
            "xz_slice",             "xz_freestream"};
}

}  // namespace cdg
