#pragma once

#include <vector>

#include "cdg/errors.hpp"

namespace cdg {

/// Vertical layer grid of every column at one time level.
///
/// Thicknesses are the primary state (the continuity budget updates them
/// directly); interface heights are stacked from the bottom and used for
/// geometry (overlaps, interface traces). Interfaces are indexed 0 (surface)
/// to nlayers (bottom), decreasing in z; layer l sits between interfaces l
/// and l+1.
struct ColumnGrid {
    int ncells = 0, nlayers = 0;
    std::vector<double> h;  // [k * nlayers + l], > 0
    std::vector<double> z;  // [k * (nlayers+1) + I]

    ColumnGrid() = default;
    ColumnGrid(int ncells_, int nlayers_)
        : ncells(ncells_), nlayers(nlayers_),
          h(std::size_t(ncells_) * nlayers_, 0.0),
          z(std::size_t(ncells_) * (nlayers_ + 1), 0.0) {}

    double thickness(int k, int l) const { return h[std::size_t(k) * nlayers + l]; }
    double& thickness(int k, int l) { return h[std::size_t(k) * nlayers + l]; }
    double iface(int k, int I) const { return z[std::size_t(k) * (nlayers + 1) + I]; }
    double& iface(int k, int I) { return z[std::size_t(k) * (nlayers + 1) + I]; }
    double zmid(int k, int l) const { return 0.5 * (iface(k, l) + iface(k, l + 1)); }

    /// Rebuild interface heights by stacking thicknesses from the stored
    /// bottom height upward. Throws StateError on non-positive thickness.
    void restack();

    /// Consistency check: positive thicknesses, monotone interfaces.
    void check() const;
};

/// Uniform-layer columns: bottom at z = -depth, top at z = ssh[k] (0 if empty).
ColumnGrid init_uniform_columns(int ncells, int nlayers, double depth,
                                const std::vector<double>& ssh = {});

} // namespace cdg
