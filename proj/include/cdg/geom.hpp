#pragma once

#include <cmath>
#include <vector>

#include "cdg/errors.hpp"

namespace cdg {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        double n = norm();
        if (n == 0.0) throw GeometryError("cannot normalize zero vector");
        return *this / n;
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

/// A point in a local tangent (or planar) frame: coordinates (a, b).
struct PlanePoint {
    double a = 0.0, b = 0.0;
};

/// Orthonormal frame tangent to a sphere of radius R at `origin`.
///
/// Rows: e_a (locally east), e_b (locally north), e_c (outward radial).
/// Local coordinates of x are (a, b, c) = A (x - origin); the plane
/// projection keeps (a, b) and drops the off-plane component c.
struct TangentFrame {
    Vec3 origin;
    Vec3 ea, eb, ec;
    double R = 1.0;

    /// Build the frame at a point on the sphere (|origin| = R required to 1e-12 relative).
    /// Within 1e-10*R of the poles the analytic rows degenerate; a fixed
    /// axis-aligned fallback frame is used instead.
    static TangentFrame at(const Vec3& origin, double R);

    /// Full local coordinates (a, b, c) of an arbitrary point.
    Vec3 to_local(const Vec3& x) const {
        Vec3 d = x - origin;
        return {ea.dot(d), eb.dot(d), ec.dot(d)};
    }

    /// Inverse of to_local.
    Vec3 to_global(const Vec3& abc) const {
        return origin + ea * abc.x + eb * abc.y + ec * abc.z;
    }

    /// Normal projection of a sphere point into the tangent plane.
    /// Requires x on the near hemisphere (x . e_c > 0).
    PlanePoint sphere_to_plane(const Vec3& x) const;

    /// Map a plane point back onto the sphere along the frame normal.
    /// Requires a^2 + b^2 < R^2 (point inside the projection limb).
    Vec3 plane_to_sphere(const PlanePoint& p) const;
};

/// Simple polygon with straight edges in a single plane frame.
struct Polygon {
    std::vector<PlanePoint> v;

    bool empty() const { return v.size() < 3; }
    std::size_t size() const { return v.size(); }

    /// Shoelace area; positive for counterclockwise orientation.
    double signed_area() const;

    /// Area-weighted centroid (valid for nondegenerate polygons; falls back to
    /// the vertex mean when the area underflows).
    PlanePoint centroid() const;

    void reverse() { std::reverse(v.begin(), v.end()); }
};

/// Clip a simple polygon against a convex polygon (Sutherland-Hodgman).
/// Both are taken in the same plane frame; orientation of either input may be
/// CW or CCW. The result is CCW (or empty).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Quadrature nodes and weights over a polygon (weights sum to the polygon area).
struct QuadratureSet {
    std::vector<PlanePoint> pts;
    std::vector<double> w;
    double area = 0.0;  // signed sum of weights before orientation fix
};

/// Build quadrature for a convex polygon by fanning triangles from the centroid.
/// order 1, 2, 3 are exact for total polynomial degree 1, 2, 4 respectively;
/// all weights share the sign of the polygon orientation (+ for CCW).
QuadratureSet polygon_quadrature(const Polygon& poly, int order);

/// Gauss-Legendre nodes on [z0, z1]; npts in {1, 2, 3}. Weights sum to (z1 - z0),
/// which may be negative for a reversed interval (signed 1-D measure).
void gauss_segment(double z0, double z1, int npts, double* nodes, double* weights);

/// Intersection point of segments p1->p2 and p3->p4, if any (proper crossing).
bool segment_intersection(const PlanePoint& p1, const PlanePoint& p2,
                          const PlanePoint& p3, const PlanePoint& p4,
                          PlanePoint& out);

} // namespace cdg
