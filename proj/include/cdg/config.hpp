#pragma once

#include <string>

#include "cdg/cases.hpp"

namespace cdg {

/// Build a case from a JSON run configuration. The document selects a named
/// case and overrides the knobs that case exposes:
///
///   {
///     "case": "deformational_sphere",      // required
///     "mesh": {"level": 4},                // sphere cases: level
///                                          // x-z cases: nx
///     "columns": {"nlayers": 10},          // layered cases
///     "velocity": {"kappa": 61.0},         // deformational: peak speed scale
///                                          // solid_body: {"cfl": 1.5}
///     "dt_seconds": 600.0,
///     "n_steps": 100,
///     "limiter": "barth_jespersen",        // none | barth_jespersen | weno
///     "basis_order": 1,
///     "diagnostics_every": 1,
///     "snapshots_at": [0, 50, 100]
///   }
///
/// Unknown keys anywhere, or knobs a case cannot honor, raise ConfigError.
CaseSpec case_from_config_text(const std::string& text);

/// Same, reading the document from a file.
CaseSpec case_from_config_file(const std::string& path);

}  // namespace cdg
