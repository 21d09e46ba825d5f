#include "cdg/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cdg/errors.hpp"
#include "cdg/limiter.hpp"

namespace cdg {

namespace {

std::shared_ptr<const HorizontalMesh> build_case_mesh(const CaseSpec& spec)
{
    if (spec.prebuilt)
        return spec.prebuilt;
    if (spec.mesh_kind == "hex")
        return std::make_shared<HorizontalMesh>(
            build_planar_hex_mesh(spec.nx, spec.ny, spec.dx));
    if (spec.mesh_kind == "icos")
        return std::make_shared<HorizontalMesh>(
            build_icosahedral_mesh(spec.level, spec.radius));
    throw ConfigError("unknown mesh kind '" + spec.mesh_kind + "'");
}

}  // namespace

Simulation::Simulation(const CaseSpec& spec)
    : spec_(spec),
      mesh_(build_case_mesh(spec)),
      ws_(make_workspace(*mesh_, spec.scheme))
{
    if (!spec_.initial)
        throw ConfigError("case '" + spec_.name + "' has no initial tracer");

    std::vector<double> ssh;
    if (spec_.ssh) {
        ssh.resize(mesh_->ncells());
        for (int k = 0; k < mesh_->ncells(); ++k)
            ssh[k] = spec_.ssh(mesh_->center[k]);
    }
    cols_ = init_uniform_columns(mesh_->ncells(), spec_.nlayers, spec_.depth, ssh);

    q_ = project_tracer(*mesh_, ws_, cols_, spec_.initial);
    apply_limiter(spec_.scheme.limiter, *mesh_, ws_.cells, cols_, q_);
}

void Simulation::step()
{
    const double t = time();
    const double dt = spec_.dt;
    const VolumeTransports vt =
        compute_volume_transports(*mesh_, ws_, cols_, spec_.velocity, t, dt);

    switch (spec_.columns) {
    case ColumnMode::Static:
        q_ = step3d(*mesh_, ws_, q_, cols_, cols_, vt, spec_.velocity, t, dt);
        break;
    case ColumnMode::Continuity: {
        ColumnGrid next = advance_columns_continuity(*mesh_, ws_, cols_, vt);
        q_ = step3d(*mesh_, ws_, q_, cols_, next, vt, spec_.velocity, t, dt);
        cols_ = std::move(next);
        break;
    }
    case ColumnMode::Prescribed: {
        ColumnGrid next = advance_columns_prescribed(*mesh_, cols_, spec_.velocity, t, dt,
                                                     spec_.scheme.trace_substeps);
        q_ = step3d(*mesh_, ws_, q_, cols_, next, vt, spec_.velocity, t, dt);
        cols_ = std::move(next);
        break;
    }
    }
    ++n_;
}

double Simulation::mass() const { return total_tracer_mass(ws_.cells, cols_, q_); }

FieldRange Simulation::range() const { return corner_range(ws_.cells, q_); }

double Simulation::l2() const
{
    if (!spec_.reference)
        return 0.0;
    return l2_error(*mesh_, ws_.cells, cols_, q_, spec_.reference, time());
}

double Simulation::rpe() const
{
    if (!spec_.density_diagnostics)
        return 0.0;
    return rpe_of_temperature(ws_.cells, cols_, q_);
}

void run_case(const CaseSpec& spec, const std::string& outdir)
{
    namespace fs = std::filesystem;
    fs::create_directories(outdir);

    Simulation sim(spec);
    save_mesh(sim.mesh(), (fs::path(outdir) / "mesh.json").string());

    std::ofstream diag(fs::path(outdir) / "diagnostics.csv");
    if (!diag)
        throw StateError("cannot write diagnostics.csv under " + outdir);
    diag << "step,time_s,mass,min,max,l2,rpe\n";
    char line[384];
    auto write_diag = [&]() {
        const FieldRange r = sim.range();
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      sim.step_index(), sim.time(), sim.mass(), r.lo, r.hi, sim.l2(),
                      sim.rpe());
        diag << line;
    };

    auto write_snapshot = [&](int s) {
        std::ofstream snap(fs::path(outdir) / ("snapshot_" + std::to_string(s) + ".csv"));
        if (!snap)
            throw StateError("cannot write snapshot under " + outdir);
        const TracerField& q = sim.tracer();
        snap << "cell,layer,cx,cy,cz,zmid,mean";
        for (int j = 1; j < q.J; ++j)
            snap << ",m" << j;
        snap << "\n";
        const HorizontalMesh& mesh = sim.mesh();
        const ColumnGrid& cols = sim.columns();
        for (int k = 0; k < mesh.ncells(); ++k) {
            const Vec3 c = mesh.center[k];
            for (int l = 0; l < cols.nlayers; ++l) {
                int m = std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g,%.17g",
                                      k, l, c.x, c.y, c.z, cols.zmid(k, l));
                for (int j = 0; j < q.J; ++j)
                    m += std::snprintf(line + m, sizeof line - m, ",%.17g", q.at(k, l, j));
                line[m] = '\n';
                snap.write(line, m + 1);
            }
        }
    };

    auto want_snapshot = [&](int s) {
        return std::find(spec.snapshots_at.begin(), spec.snapshots_at.end(), s) !=
               spec.snapshots_at.end();
    };

    write_diag();
    if (want_snapshot(0))
        write_snapshot(0);
    const int every = std::max(1, spec.diagnostics_every);
    for (int s = 1; s <= spec.n_steps; ++s) {
        sim.step();
        if (s % every == 0 || s == spec.n_steps)
            write_diag();
        if (want_snapshot(s))
            write_snapshot(s);
    }
}

std::vector<ConvergenceRow> convergence_sweep(const std::string& case_name,
                                              int level_lo, int level_hi)
{
    if (level_lo < 1 || level_hi < level_lo)
        throw ConfigError("convergence_sweep: bad level range");

    std::vector<ConvergenceRow> rows;
    for (int level = level_lo; level <= level_hi; ++level) {
        CaseSpec cs;
        if (case_name == "deformational_sphere") {
            cs = case_deformational_sphere(level);
        } else if (case_name == "solid_body") {
            cs = case_solid_body("sphere", 1.5, level);
            cs.n_steps /= 10;  // one revolution is enough for the error slope
        } else {
            throw ConfigError("convergence_sweep: no refinement family for case '" +
                              case_name + "'");
        }
        if (!cs.reference)
            throw ConfigError("convergence_sweep: case has no reference solution");
        cs.scheme.limiter = LimiterKind::None;

        const auto tic = std::chrono::steady_clock::now();
        Simulation sim(cs);
        for (int s = 0; s < cs.n_steps; ++s)
            sim.step();
        const double l2 = sim.l2();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - tic).count();
        rows.push_back({level, sim.mesh().ncells(), cs.dt, cs.n_steps, l2, secs});
    }
    return rows;
}

}  // namespace cdg
