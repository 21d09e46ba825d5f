// Command-line front end: mesh generation, single runs, convergence sweeps.

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "cdg/config.hpp"
#include "cdg/driver.hpp"
#include "cdg/mesh.hpp"

namespace {

int cmd_mesh(const std::string& gen, int level, int nx, int ny, double dx, double radius,
             const std::string& out) {
    cdg::HorizontalMesh mesh;
    if (gen == "hex") {
        mesh = cdg::build_planar_hex_mesh(nx, ny, dx);
    } else if (gen == "icos") {
        mesh = cdg::build_icosahedral_mesh(level, radius);
    } else {
        throw cdg::ConfigError("unknown mesh generator: " + gen);
    }
    mesh.validate();
    cdg::save_mesh(mesh, out);
    std::printf("wrote %s: %d cells, %d edges, %d vertices\n", out.c_str(), mesh.ncells(),
                mesh.nedges(), mesh.nverts());
    return 0;
}

int cmd_run(const std::string& config, const std::string& out) {
    const cdg::CaseSpec cs = cdg::case_from_config_file(config);
    cdg::run_case(cs, out);
    std::printf("case %s: %d steps of %.17g s written under %s\n", cs.name.c_str(),
                cs.n_steps, cs.dt, out.c_str());
    return 0;
}

int cmd_convergence(const std::string& name, const std::string& levels) {
    int lo = 0, hi = 0;
    if (std::sscanf(levels.c_str(), "%d..%d", &lo, &hi) != 2)
        throw cdg::ConfigError("--levels expects a range like 3..5");

    const auto rows = cdg::convergence_sweep(name, lo, hi);
    std::printf("%-6s %-8s %-14s %-7s %-13s %-7s %s\n", "level", "cells", "dt_s", "steps",
                "l2_error", "order", "seconds");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        std::string order = "-";
        if (i > 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", std::log2(rows[i - 1].l2 / r.l2));
            order = buf;
        }
        std::printf("%-6d %-8d %-14.6g %-7d %-13.6g %-7s %.1f\n", r.level, r.ncells, r.dt,
                    r.n_steps, r.l2, order.c_str(), r.seconds);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"characteristic discontinuous Galerkin tracer transport"};
    app.require_subcommand(1);

    auto* mesh_cmd = app.add_subcommand("mesh", "generate a mesh and write it as JSON");
    std::string gen, mesh_out = "mesh.json";
    int level = 3, nx = 16, ny = 16;
    double dx = 10000.0, radius = 6.37122e6;
    mesh_cmd->add_option("--gen", gen, "generator: hex | icos")->required();
    mesh_cmd->add_option("--level", level, "icosahedral subdivision level");
    mesh_cmd->add_option("--nx", nx, "hex cells along x");
    mesh_cmd->add_option("--ny", ny, "hex cells along y (even)");
    mesh_cmd->add_option("--dx", dx, "hex center spacing [m]");
    mesh_cmd->add_option("--radius", radius, "sphere radius [m]");
    mesh_cmd->add_option("--out", mesh_out, "output path");

    auto* run_cmd = app.add_subcommand("run", "run a configured case and write diagnostics");
    std::string config, run_out;
    run_cmd->add_option("--config", config, "JSON run configuration")->required();
    run_cmd->add_option("--out", run_out, "output directory")->required();

    auto* conv_cmd =
        app.add_subcommand("convergence", "refinement sweep against the exact solution");
    std::string conv_case = "deformational_sphere", levels = "3..5";
    conv_cmd->add_option("--case", conv_case, "case with a refinement family");
    conv_cmd->add_option("--levels", levels, "subdivision range, e.g. 3..5");

    CLI11_PARSE(app, argc, argv);

    try {
        if (mesh_cmd->parsed())
            return cmd_mesh(gen, level, nx, ny, dx, radius, mesh_out);
        if (run_cmd->parsed())
            return cmd_run(config, run_out);
        if (conv_cmd->parsed())
            return cmd_convergence(conv_case, levels);
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 1;
    }
    return 0;
}
