#pragma once

#include <vector>

#include "cdg/basis.hpp"
#include "cdg/column.hpp"
#include "cdg/mesh.hpp"

namespace cdg {

enum class LimiterKind { None, BarthJespersen, Weno };

/// 3D vertex-based Barth-Jespersen limiter.
///
/// Bounds per element: means of the element itself, every cell sharing a
/// vertex with it (same layer), and the layers directly above/below in its
/// own column. Sample points: the polygon corners at the layer top and
/// bottom. One alpha per element scales all higher moments; the mean is
/// untouched. Exactly idempotent (alpha within 1e-12 of 1 snaps to 1).
void barth_jespersen_3d(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                        TracerField& q);

/// Simplified WENO blend (linear basis only): candidates are the element's own
/// moments plus each edge neighbor's and vertical neighbor's reconstruction
/// re-expanded about this element's means; weights ~ (eps + SI)^-2 with
/// SI = sum of squared moments. Mean untouched.
void weno_blend_3d(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                   const ColumnGrid& cols, TracerField& q);

void apply_limiter(LimiterKind kind, const HorizontalMesh& mesh,
                   const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                   TracerField& q);

} // namespace cdg
