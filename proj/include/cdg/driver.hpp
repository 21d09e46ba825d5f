#pragma once

#include <string>
#include <vector>

#include "cdg/cases.hpp"
#include "cdg/diagnostics.hpp"

namespace cdg {

/// Owns the evolving state of one configured case and advances it in time.
/// Construction builds (or adopts) the mesh, stands up the columns, projects
/// the initial tracer and applies the configured limiter once, so the state
/// at step 0 is exactly what the first transport step will see.
class Simulation {
public:
    explicit Simulation(const CaseSpec& spec);

    /// Advance one step of spec.dt.
    void step();

    int step_index() const { return n_; }
    double time() const { return n_ * spec_.dt; }

    const CaseSpec& spec() const { return spec_; }
    const HorizontalMesh& mesh() const { return *mesh_; }
    const SchemeWorkspace& workspace() const { return ws_; }
    const ColumnGrid& columns() const { return cols_; }
    const TracerField& tracer() const { return q_; }

    double mass() const;
    FieldRange range() const;
    /// Relative L2 error against the case reference at the current time;
    /// 0 when the case defines no reference.
    double l2() const;
    /// Resting potential energy of the tracer-as-temperature; 0 unless the
    /// case enables density diagnostics.
    double rpe() const;

private:
    CaseSpec spec_;
    std::shared_ptr<const HorizontalMesh> mesh_;
    SchemeWorkspace ws_;
    ColumnGrid cols_;
    TracerField q_;
    int n_ = 0;
};

/// Run a case to completion under `outdir`, writing mesh.json, a
/// diagnostics.csv time series (step 0, every diagnostics_every steps, and
/// the final step) and snapshot_<step>.csv element dumps at the requested
/// steps.
void run_case(const CaseSpec& spec, const std::string& outdir);

struct ConvergenceRow {
    int level = 0;
    int ncells = 0;
    double dt = 0.0;
    int n_steps = 0;
    double l2 = 0.0;
    double seconds = 0.0;
};

/// Refinement sweep for a spherical case with an exact reference: run levels
/// level_lo .. level_hi unlimited (the slope of the pure scheme is the
/// quantity of interest) and report the final relative L2 error per level.
/// The time step halves with each refinement through the case factories.
std::vector<ConvergenceRow> convergence_sweep(const std::string& case_name,
                                              int level_lo, int level_hi);

}  // namespace cdg
