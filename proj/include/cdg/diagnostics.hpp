#pragma once

#include <functional>
#include <vector>

#include "cdg/basis.hpp"
#include "cdg/column.hpp"
#include "cdg/mesh.hpp"

namespace cdg {

/// Total tracer amount: sum of mean * cell area * layer thickness over all
/// elements, using the quadrature areas the scheme itself conserves.
double total_tracer_mass(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                         const TracerField& q);

struct FieldRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Global extrema of the reconstructed tracer over every element's corner set
/// (polygon corners at the layer top and bottom) -- the same points the
/// limiter controls.
FieldRange corner_range(const std::vector<CellBasisData>& cells, const TracerField& q);

/// Relative L2 error against a reference function by element quadrature:
/// sqrt(sum (q - ref)^2 dV / sum ref^2 dV). The reference takes (surface
/// position, height, time). Falls back to the absolute norm when the
/// reference is identically zero.
double l2_error(const HorizontalMesh& mesh, const std::vector<CellBasisData>& cells,
                const ColumnGrid& cols, const TracerField& q,
                const std::function<double(const Vec3&, double, double)>& ref, double t);

/// Linear temperature-dependent equation of state, T in degrees C.
inline double eos_density(double T) { return 1000.0 - 0.2 * (T - 5.0); }

/// Resting potential energy: reorder all elements by descending density,
/// restack their volumes into a single column spanning the domain's total
/// horizontal area, and integrate g rho* z over the result.
double rpe(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
           const std::vector<double>& density);

/// RPE of a tracer interpreted as temperature through the equation of state,
/// one density per element from its mean.
double rpe_of_temperature(const std::vector<CellBasisData>& cells, const ColumnGrid& cols,
                          const TracerField& q);

} // namespace cdg
