#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cdg/geom.hpp"

namespace cdg {

/// Number of basis functions for a given expansion order.
/// order 1: {1, x, y, z}  (J = 4)
/// order 2: adds the horizontal quadratic moments {x^2, xy, y^2}  (J = 7, planar meshes only)
inline int basis_size(int order) {
    if (order == 1) return 4;
    if (order == 2) return 7;
    throw ConfigError("basis order must be 1 or 2");
}

/// Static horizontal part of the modal Taylor basis of one cell.
///
/// Means are raw moments over the cell in its local frame; subtracting them
/// makes every non-constant function massless, so the mean moment decouples
/// from the rest of the mass matrix. dx/dy are the bounding-box half-widths.
struct HorizontalBasis {
    int order = 1;
    double xbar = 0, ybar = 0;
    double dx = 1, dy = 1;
    double x2bar = 0, xybar = 0, y2bar = 0;  // raw second moments (order 2)

    int nfuncs() const { return order == 1 ? 2 : 5; }

    /// Evaluate the non-constant horizontal functions at a local-frame point.
    /// out must hold nfuncs() values.
    void eval(const PlanePoint& p, double* out) const {
        out[0] = (p.a - xbar) / dx;
        out[1] = (p.b - ybar) / dy;
        if (order >= 2) {
            out[2] = (p.a * p.a - x2bar) / (2.0 * dx * dx);
            out[3] = (p.a * p.b - xybar) / (dx * dy);
            out[4] = (p.b * p.b - y2bar) / (2.0 * dy * dy);
        }
    }
};

/// Compute the horizontal basis descriptor from a cell polygon and its quadrature.
HorizontalBasis compute_horizontal_basis(const Polygon& cell, const QuadratureSet& q, int order);

/// Everything the scheme precomputes per cell: quadrature, basis means, the
/// horizontal Gram matrix and cached basis values at quadrature points and
/// polygon corners. area_q (the weight sum) is the area the scheme uses
/// wherever bit-consistency with quadrature sums matters.
struct CellBasisData {
    HorizontalBasis hb;
    QuadratureSet quad;
    double area_q = 0;
    std::vector<double> gram;         // nh x nh
    std::vector<double> beta_quad;    // nh values per quadrature point
    std::vector<double> beta_corner;  // nh values per polygon vertex
    int ncorners = 0;

    const double* quad_beta(int ip) const { return &beta_quad[std::size_t(ip) * hb.nfuncs()]; }
    const double* corner_beta(int iv) const { return &beta_corner[std::size_t(iv) * hb.nfuncs()]; }
};

CellBasisData build_cell_basis(const Polygon& cell, int order, int quad_order);

/// Vertical (linear) basis value: offset from the layer midpoint scaled by thickness.
inline double eval_vertical(double zeta, double h) { return zeta / h; }

/// Dense symmetric element matrix with an LDL^T factorization.
/// Row/column 0 is diagonal by construction (massless moments), so the mean
/// moment never mixes with the rest in a solve.
struct ElementMatrix {
    int J = 0;
    std::array<double, 49> m{};    // row-major J x J (J <= 7)
    std::array<double, 49> fac{};  // LDL^T factors (unit lower + D on diagonal)
    bool factored = false;

    double& at(int i, int j) { return m[i * J + j]; }
    double at(int i, int j) const { return m[i * J + j]; }

    void factor();                           // throws SolveError when near-singular
    void solve(const double* rhs, double* x);  // factor() on demand
    double rcond_estimate() const;           // min|D| / max|D| after factoring
};

/// Assemble the element mass matrix: M_ij = integral over the element of
/// beta_i beta_j, with the element a prism of horizontal Gram matrix `gram`
/// (integral of products of the non-constant horizontal functions over the
/// cell, area `area`) and thickness h.
ElementMatrix mass_matrix(const HorizontalBasis& hb, const double* gram, double area, double h);

/// Solve M c = rhs for one element (spec-level convenience wrapper).
void solve_moments(ElementMatrix& M, const double* rhs, double* c);

/// Per-element modal coefficients for one tracer, flat storage.
struct TracerField {
    int ncells = 0, nlayers = 0, J = 0;

    std::vector<double> c;

    TracerField() = default;
    TracerField(int ncells_, int nlayers_, int J_)
        : ncells(ncells_), nlayers(nlayers_), J(J_),
          c(std::size_t(ncells_) * nlayers_ * J_, 0.0) {}

    double& at(int k, int l, int j) { return c[(std::size_t(k) * nlayers + l) * J + j]; }
    double at(int k, int l, int j) const { return c[(std::size_t(k) * nlayers + l) * J + j]; }
    double* moments(int k, int l) { return &c[(std::size_t(k) * nlayers + l) * J]; }
    const double* moments(int k, int l) const { return &c[(std::size_t(k) * nlayers + l) * J]; }
};

} // namespace cdg
