#include "cdg/basis.hpp"

#include <cmath>
#include <limits>

namespace cdg {

HorizontalBasis compute_horizontal_basis(const Polygon& cell, const QuadratureSet& q, int order) {
    if (order != 1 && order != 2) throw ConfigError("basis order must be 1 or 2");
    if (cell.empty() || q.pts.empty()) throw GeometryError("degenerate cell in basis setup");

    HorizontalBasis hb;
    hb.order = order;

    double amin = cell.v[0].a, amax = amin, bmin = cell.v[0].b, bmax = bmin;
    for (const auto& p : cell.v) {
        amin = std::min(amin, p.a);
        amax = std::max(amax, p.a);
        bmin = std::min(bmin, p.b);
        bmax = std::max(bmax, p.b);
    }
    hb.dx = 0.5 * (amax - amin);
    hb.dy = 0.5 * (bmax - bmin);
    if (hb.dx <= 0.0 || hb.dy <= 0.0) throw GeometryError("cell has zero extent");

    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < q.pts.size(); ++i) {
        const double w = q.w[i], a = q.pts[i].a, b = q.pts[i].b;
        sw += w;
        sx += w * a;
        sy += w * b;
        sxx += w * a * a;
        sxy += w * a * b;
        syy += w * b * b;
    }
    hb.xbar = sx / sw;
    hb.ybar = sy / sw;
    if (order >= 2) {
        hb.x2bar = sxx / sw;
        hb.xybar = sxy / sw;
        hb.y2bar = syy / sw;
    }
    return hb;
}

void ElementMatrix::factor() {
    // LDL^T without pivoting: the matrix is symmetric positive definite by
    // construction (Gram matrix of independent functions).
    double maxdiag = 0.0;
    for (int i = 0; i < J; ++i) maxdiag = std::max(maxdiag, std::abs(at(i, i)));
    if (maxdiag <= 0.0) throw SolveError("element mass matrix has empty diagonal");

    for (int i = 0; i < J * J; ++i) fac[i] = 0.0;
    for (int j = 0; j < J; ++j) {
        double d = at(j, j);
        for (int k = 0; k < j; ++k) d -= fac[j * J + k] * fac[j * J + k] * fac[k * J + k];
        if (!(std::abs(d) > 1e-14 * maxdiag))
            throw SolveError("element mass matrix is numerically singular");
        fac[j * J + j] = d;
        for (int i = j + 1; i < J; ++i) {
            double s = at(i, j);
            for (int k = 0; k < j; ++k) s -= fac[i * J + k] * fac[j * J + k] * fac[k * J + k];
            fac[i * J + j] = s / d;
        }
    }
    factored = true;
}

void ElementMatrix::solve(const double* rhs, double* x) {
    if (!factored) factor();
    // L y = rhs
    for (int i = 0; i < J; ++i) {
        double s = rhs[i];
        for (int k = 0; k < i; ++k) s -= fac[i * J + k] * x[k];
        x[i] = s;
    }
    // D z = y
    for (int i = 0; i < J; ++i) x[i] /= fac[i * J + i];
    // L^T c = z
    for (int i = J - 1; i >= 0; --i) {
        double s = x[i];
        for (int k = i + 1; k < J; ++k) s -= fac[k * J + i] * x[k];
        x[i] = s;
    }
}

double ElementMatrix::rcond_estimate() const {
    if (!factored) throw SolveError("rcond requested before factorization");
    double dmin = std::numeric_limits<double>::max(), dmax = 0.0;
    for (int i = 0; i < J; ++i) {
        const double d = std::abs(fac[i * J + i]);
        dmin = std::min(dmin, d);
        dmax = std::max(dmax, d);
    }
    return dmax > 0.0 ? dmin / dmax : 0.0;
}

ElementMatrix mass_matrix(const HorizontalBasis& hb, const double* gram, double area, double h) {
    if (!(h > 0.0)) throw StateError("non-positive layer thickness in mass matrix");
    const int nh = hb.nfuncs();
    ElementMatrix M;
    M.J = 1 + nh + 1;
    M.at(0, 0) = area * h;
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < nh; ++j) M.at(1 + i, 1 + j) = gram[i * nh + j] * h;
    // Vertical function (z - zbar)/h over thickness h: integral of its square is h/12.
    M.at(1 + nh, 1 + nh) = area * h / 12.0;
    return M;
}

void solve_moments(ElementMatrix& M, const double* rhs, double* c) { M.solve(rhs, c); }

CellBasisData build_cell_basis(const Polygon& cell, int order, int quad_order) {
    CellBasisData d;
    d.quad = polygon_quadrature(cell, quad_order);
    d.hb = compute_horizontal_basis(cell, d.quad, order);
    d.area_q = 0;
    for (double w : d.quad.w) d.area_q += w;

    const int nh = d.hb.nfuncs();
    const std::size_t nq = d.quad.pts.size();
    d.beta_quad.resize(nq * nh);
    for (std::size_t i = 0; i < nq; ++i) d.hb.eval(d.quad.pts[i], &d.beta_quad[i * nh]);

    d.ncorners = int(cell.v.size());
    d.beta_corner.resize(std::size_t(d.ncorners) * nh);
    for (int i = 0; i < d.ncorners; ++i) d.hb.eval(cell.v[i], &d.beta_corner[std::size_t(i) * nh]);

    d.gram.assign(std::size_t(nh) * nh, 0.0);
    for (std::size_t p = 0; p < nq; ++p) {
        const double* b = d.quad_beta(int(p));
        for (int i = 0; i < nh; ++i)
            for (int j = i; j < nh; ++j) d.gram[i * nh + j] += d.quad.w[p] * b[i] * b[j];
    }
    for (int i = 0; i < nh; ++i)
        for (int j = 0; j < i; ++j) d.gram[i * nh + j] = d.gram[j * nh + i];
    return d;
}

} // namespace cdg
