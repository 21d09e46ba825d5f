#include "cdg/geom.hpp"

#include <algorithm>
#include <cmath>

namespace cdg {

TangentFrame TangentFrame::at(const Vec3& origin, double R) {
    if (R <= 0.0) throw GeometryError("tangent frame: radius must be positive");
    double n = origin.norm();
    if (std::abs(n - R) > 1e-12 * R)
        throw GeometryError("tangent frame: origin is not on the sphere");

    TangentFrame f;
    f.origin = origin;
    f.R = R;

    double r = std::sqrt(origin.x * origin.x + origin.y * origin.y);
    if (r < 1e-10 * R) {
        // Pole fallback: axis-aligned right-handed frame, normal matching z.
        double s = origin.z >= 0.0 ? 1.0 : -1.0;
        f.ea = {1.0, 0.0, 0.0};
        f.eb = {0.0, s, 0.0};
        f.ec = {0.0, 0.0, s};
        return f;
    }

    const double xo = origin.x, yo = origin.y, zo = origin.z;
    f.ea = {-yo / r, xo / r, 0.0};
    f.eb = {-xo * zo / (r * R), -yo * zo / (r * R), r / R};
    f.ec = {xo / R, yo / R, zo / R};
    return f;
}

PlanePoint TangentFrame::sphere_to_plane(const Vec3& x) const {
    if (x.dot(ec) <= 0.0)
        throw GeometryError("sphere_to_plane: point is on the opposite hemisphere");
    Vec3 d = x - origin;
    return {ea.dot(d), eb.dot(d)};
}

Vec3 TangentFrame::plane_to_sphere(const PlanePoint& p) const {
    double rr = R * R - p.a * p.a - p.b * p.b;
    if (rr <= 0.0)
        throw GeometryError("plane_to_sphere: point (" + std::to_string(p.a) + ", " +
                            std::to_string(p.b) + ") outside the projection limb R = " +
                            std::to_string(R));
    double c = std::sqrt(rr) - R;
    return to_global({p.a, p.b, c});
}

double Polygon::signed_area() const {
    if (v.size() < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const PlanePoint& p = v[i];
        const PlanePoint& q = v[(i + 1) % n];
        s += p.a * q.b - q.a * p.b;
    }
    return 0.5 * s;
}

PlanePoint Polygon::centroid() const {
    double A = signed_area();
    if (std::abs(A) < 1e-300) {
        PlanePoint m;
        for (const auto& p : v) { m.a += p.a; m.b += p.b; }
        if (!v.empty()) { m.a /= double(v.size()); m.b /= double(v.size()); }
        return m;
    }
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, n = v.size(); i < n; ++i) {
        const PlanePoint& p = v[i];
        const PlanePoint& q = v[(i + 1) % n];
        double cr = p.a * q.b - q.a * p.b;
        cx += (p.a + q.a) * cr;
        cy += (p.b + q.b) * cr;
    }
    return {cx / (6.0 * A), cy / (6.0 * A)};
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
    Polygon out;
    if (subject.v.size() < 3 || clip.v.size() < 3) return out;

    // Work on CCW copies.
    Polygon subj = subject;
    if (subj.signed_area() < 0.0) subj.reverse();
    Polygon clp = clip;
    if (clp.signed_area() < 0.0) clp.reverse();

    std::vector<PlanePoint> in = subj.v;
    std::vector<PlanePoint> next;

    const std::size_t nc = clp.v.size();
    for (std::size_t e = 0; e < nc && !in.empty(); ++e) {
        const PlanePoint& c1 = clp.v[e];
        const PlanePoint& c2 = clp.v[(e + 1) % nc];
        // Inside = left of edge c1->c2 for a CCW clip polygon.
        auto side = [&](const PlanePoint& p) {
            return (c2.a - c1.a) * (p.b - c1.b) - (c2.b - c1.b) * (p.a - c1.a);
        };
        next.clear();
        for (std::size_t i = 0, n = in.size(); i < n; ++i) {
            const PlanePoint& p = in[i];
            const PlanePoint& q = in[(i + 1) % n];
            double sp = side(p), sq = side(q);
            auto cross_point = [&]() {
                double t = sp / (sp - sq);
                return PlanePoint{p.a + t * (q.a - p.a), p.b + t * (q.b - p.b)};
            };
            if (sp >= 0.0) {
                next.push_back(p);
                if (sq < 0.0) next.push_back(cross_point());
            } else if (sq >= 0.0) {
                next.push_back(cross_point());
            }
        }
        in.swap(next);
    }

    // Drop duplicate / collinear-degenerate runs of identical points.
    Polygon result;
    for (const auto& p : in) {
        if (!result.v.empty()) {
            const PlanePoint& last = result.v.back();
            if (std::abs(p.a - last.a) < 1e-14 && std::abs(p.b - last.b) < 1e-14) continue;
        }
        result.v.push_back(p);
    }
    while (result.v.size() > 1) {
        const PlanePoint& first = result.v.front();
        const PlanePoint& last = result.v.back();
        if (std::abs(first.a - last.a) < 1e-14 && std::abs(first.b - last.b) < 1e-14)
            result.v.pop_back();
        else
            break;
    }
    if (result.v.size() < 3) result.v.clear();
    return result;
}

namespace {

// Triangle rules in barycentric coordinates (l1, l2, l3), weight fractions of
// the triangle area. order 1 -> degree 1, order 2 -> degree 2, order 3 -> the
// 6-point Strang rule (degree 4); all weights positive.
struct TriRule {
    int n;
    const double (*bary)[3];
    const double* wf;
};

const double kBary1[][3] = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
const double kW1[] = {1.0};

const double kBary2[][3] = {
    {2.0 / 3, 1.0 / 6, 1.0 / 6}, {1.0 / 6, 2.0 / 3, 1.0 / 6}, {1.0 / 6, 1.0 / 6, 2.0 / 3}};
const double kW2[] = {1.0 / 3, 1.0 / 3, 1.0 / 3};

const double kA3a = 0.816847572980459, kB3a = 0.091576213509771;
const double kA3b = 0.108103018168070, kB3b = 0.445948490915965;
const double kBary3[][3] = {
    {kA3a, kB3a, kB3a}, {kB3a, kA3a, kB3a}, {kB3a, kB3a, kA3a},
    {kA3b, kB3b, kB3b}, {kB3b, kA3b, kB3b}, {kB3b, kB3b, kA3b}};
const double kW3[] = {0.109951743655322, 0.109951743655322, 0.109951743655322,
                      0.223381589678011, 0.223381589678011, 0.223381589678011};

TriRule tri_rule(int order) {
    switch (order) {
        case 1: return {1, kBary1, kW1};
        case 2: return {3, kBary2, kW2};
        case 3: return {6, kBary3, kW3};
        default: throw GeometryError("polygon_quadrature: order must be 1, 2 or 3");
    }
}

} // namespace

QuadratureSet polygon_quadrature(const Polygon& poly, int order) {
    TriRule rule = tri_rule(order);
    QuadratureSet qs;
    if (poly.v.size() < 3) throw GeometryError("polygon quadrature needs at least 3 vertices");

    // Fan from the vertex average rather than the area centroid: a signed
    // triangle fan integrates the polygon exactly from any origin, and the
    // vertex average stays inside the hull even for slivers whose tiny net
    // area makes the moment/area centroid ill-conditioned (it can land
    // arbitrarily far away and off the projection chart).
    PlanePoint c;
    for (const auto& p : poly.v) {
        c.a += p.a;
        c.b += p.b;
    }
    c.a /= double(poly.v.size());
    c.b /= double(poly.v.size());
    const std::size_t n = poly.v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PlanePoint& p = poly.v[i];
        const PlanePoint& q = poly.v[(i + 1) % n];
        // Signed triangle (c, p, q).
        double a2 = (p.a - c.a) * (q.b - c.b) - (q.a - c.a) * (p.b - c.b);
        double at = 0.5 * a2;
        if (at == 0.0) continue;
        for (int k = 0; k < rule.n; ++k) {
            const double* l = rule.bary[k];
            qs.pts.push_back({l[0] * c.a + l[1] * p.a + l[2] * q.a,
                              l[0] * c.b + l[1] * p.b + l[2] * q.b});
            qs.w.push_back(rule.wf[k] * at);
        }
    }
    for (double w : qs.w) qs.area += w;
    return qs;
}

void gauss_segment(double z0, double z1, int npts, double* nodes, double* weights) {
    double mid = 0.5 * (z0 + z1);
    double half = 0.5 * (z1 - z0);
    switch (npts) {
        case 1:
            nodes[0] = mid;
            weights[0] = 2.0 * half;
            break;
        case 2: {
            double d = half / std::sqrt(3.0);
            nodes[0] = mid - d;
            nodes[1] = mid + d;
            weights[0] = weights[1] = half;
            break;
        }
        case 3: {
            double d = half * std::sqrt(3.0 / 5.0);
            nodes[0] = mid - d;
            nodes[1] = mid;
            nodes[2] = mid + d;
            weights[0] = weights[2] = half * 5.0 / 9.0;
            weights[1] = half * 8.0 / 9.0;
            break;
        }
        default:
            throw GeometryError("gauss_segment: npts must be 1, 2 or 3");
    }
}

bool segment_intersection(const PlanePoint& p1, const PlanePoint& p2,
                          const PlanePoint& p3, const PlanePoint& p4,
                          PlanePoint& out) {
    double rx = p2.a - p1.a, ry = p2.b - p1.b;
    double sx = p4.a - p3.a, sy = p4.b - p3.b;
    double den = rx * sy - ry * sx;
    if (den == 0.0) return false;
    double qx = p3.a - p1.a, qy = p3.b - p1.b;
    double t = (qx * sy - qy * sx) / den;
    double u = (qx * ry - qy * rx) / den;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) return false;
    out = {p1.a + t * rx, p1.b + t * ry};
    return true;
}

} // namespace cdg
