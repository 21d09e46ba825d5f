#include <cmath>
#include <random>

#include <doctest.h>

#include "cdg/geom.hpp"

using namespace cdg;

namespace {

Polygon make_box(double ax, double bx, double ay, double by) {
    Polygon p;
    p.v = {{ax, ay}, {bx, ay}, {bx, by}, {ax, by}};
    return p;
}

double quad_integral(const QuadratureSet& q, double (*f)(double, double)) {
    double s = 0;
    for (std::size_t i = 0; i < q.pts.size(); ++i) s += q.w[i] * f(q.pts[i].a, q.pts[i].b);
    return s;
}

} // namespace

TEST_SUITE("geom") {

TEST_CASE("tangent frame axes at a 45-degree equatorial point") {
    const double R = 6.37122e6;
    const double s = 1.0 / std::sqrt(2.0);
    const TangentFrame fr = TangentFrame::at({R * s, R * s, 0.0}, R);
    CHECK(std::abs(fr.ea.x - (-s)) < 1e-15);
    CHECK(std::abs(fr.ea.y - s) < 1e-15);
    CHECK(std::abs(fr.ea.z) < 1e-15);
    CHECK(std::abs(fr.eb.x) < 1e-15);
    CHECK(std::abs(fr.eb.y) < 1e-15);
    CHECK(std::abs(fr.eb.z - 1.0) < 1e-15);
    CHECK(std::abs(fr.ec.x - s) < 1e-15);
    CHECK(std::abs(fr.ec.y - s) < 1e-15);
    CHECK(std::abs(fr.ec.z) < 1e-15);
}

TEST_CASE("tangent frame at the poles uses the fallback axes") {
    const TangentFrame north = TangentFrame::at({0, 0, 2.0}, 2.0);
    CHECK(north.ea.x == 1.0);
    CHECK(north.eb.y == 1.0);
    CHECK(north.ec.z == 1.0);
    const TangentFrame south = TangentFrame::at({0, 0, -2.0}, 2.0);
    CHECK(south.eb.y == -1.0);
    CHECK(south.ec.z == -1.0);
}

TEST_CASE("tangent frames are right-handed orthonormal everywhere") {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double R = 6.37122e6;
    for (int trial = 0; trial < 1000; ++trial) {
        Vec3 x{gauss(rng), gauss(rng), gauss(rng)};
        if (x.norm() < 1e-3) continue;
        const TangentFrame fr = TangentFrame::at(x.normalized() * R, R);
        CHECK(std::abs(fr.ea.norm() - 1.0) < 1e-14);
        CHECK(std::abs(fr.eb.norm() - 1.0) < 1e-14);
        CHECK(std::abs(fr.ec.norm() - 1.0) < 1e-14);
        CHECK(std::abs(dot(fr.ea, fr.eb)) < 1e-14);
        CHECK(std::abs(dot(fr.ea, fr.ec)) < 1e-14);
        CHECK(std::abs(dot(fr.eb, fr.ec)) < 1e-14);
        CHECK((cross(fr.ea, fr.eb) - fr.ec).norm() < 1e-13);
    }
}

TEST_CASE("frame construction rejects off-sphere origins") {
    CHECK_THROWS_AS(TangentFrame::at({1.0, 0.0, 0.0}, 2.0), GeometryError);
}

TEST_CASE("sphere/plane projection round trips") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(-0.05, 0.05);
    const double R = 6.37122e6;
    for (int trial = 0; trial < 500; ++trial) {
        Vec3 o{gauss(rng), gauss(rng), gauss(rng)};
        if (o.norm() < 1e-3) continue;
        const TangentFrame fr = TangentFrame::at(o.normalized() * R, R);
        const PlanePoint p{unif(rng) * R, unif(rng) * R};
        const Vec3 q = fr.plane_to_sphere(p);
        CHECK(std::abs(q.norm() - R) < 1e-9 * R);  // exactly on the sphere
        const PlanePoint back = fr.sphere_to_plane(q);
        CHECK(std::abs(back.a - p.a) < 1e-9 * std::max(1.0, std::abs(p.a)));
        CHECK(std::abs(back.b - p.b) < 1e-9 * std::max(1.0, std::abs(p.b)));
    }
}

TEST_CASE("projection rejects the far hemisphere and the limb") {
    const double R = 1.0;
    const TangentFrame fr = TangentFrame::at({0, 0, R}, R);
    CHECK_THROWS_AS(fr.sphere_to_plane({0, 0, -R}), GeometryError);
    CHECK_THROWS_AS(fr.sphere_to_plane({R, 0, 0}), GeometryError);
    CHECK_THROWS_AS(fr.plane_to_sphere({R, R}), GeometryError);
}

TEST_CASE("convex clip of offset unit squares") {
    const Polygon a = make_box(0, 1, 0, 1);
    const Polygon b = make_box(0.5, 1.5, 0, 1);
    const Polygon c = clip_convex(a, b);
    CHECK(std::abs(c.signed_area() - 0.5) < 1e-15);
}

TEST_CASE("clip of a polygon with itself returns the same area") {
    Polygon hex;
    for (int i = 0; i < 6; ++i) {
        const double th = M_PI * i / 3.0;
        hex.v.push_back({std::cos(th), std::sin(th)});
    }
    const Polygon c = clip_convex(hex, hex);
    CHECK(std::abs(c.signed_area() - hex.signed_area()) < 1e-14);
}

TEST_CASE("clip result is independent of input orientation") {
    Polygon a = make_box(0, 1, 0, 1);
    Polygon b = make_box(0.25, 2.0, 0.25, 2.0);
    a.reverse();  // clockwise subject
    const Polygon c = clip_convex(a, b);
    CHECK(std::abs(c.signed_area() - 0.5625) < 1e-15);
}

TEST_CASE("disjoint polygons clip to nothing") {
    const Polygon a = make_box(0, 1, 0, 1);
    const Polygon b = make_box(2, 3, 0, 1);
    CHECK(clip_convex(a, b).empty());
}

TEST_CASE("clipping against half-box partitions preserves area") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Polygon p;  // random convex polygon: points on a circle at sorted angles
        const int n = 3 + int(trial % 5);
        const double r = unif(rng);
        for (int i = 0; i < n; ++i) {
            const double th = 2.0 * M_PI * (i + 0.3 * unif(rng)) / n;
            p.v.push_back({r * std::cos(th), r * std::sin(th)});
        }
        const double cut = 0.4 * (unif(rng) - 0.6);
        const Polygon left = make_box(-10, cut, -10, 10);
        const Polygon right = make_box(cut, 10, -10, 10);
        const double al = clip_convex(p, left).signed_area();
        const double ar = clip_convex(p, right).signed_area();
        CHECK(std::abs(al + ar - p.signed_area()) < 1e-14);
    }
}

TEST_CASE("triangle quadrature integrates monomials exactly") {
    Polygon tri;
    tri.v = {{0, 0}, {1, 0}, {0, 1}};

    const QuadratureSet q1 = polygon_quadrature(tri, 1);
    CHECK(std::abs(q1.area - 0.5) < 1e-15);
    CHECK(std::abs(quad_integral(q1, [](double x, double) { return x; }) - 1.0 / 6.0) < 1e-15);

    const QuadratureSet q2 = polygon_quadrature(tri, 2);
    CHECK(std::abs(quad_integral(q2, [](double x, double) { return x * x; }) - 1.0 / 12.0) < 1e-15);
    CHECK(std::abs(quad_integral(q2, [](double x, double y) { return x * y; }) - 1.0 / 24.0) < 1e-15);

    const QuadratureSet q3 = polygon_quadrature(tri, 3);
    CHECK(std::abs(quad_integral(q3, [](double x, double) { return x * x * x; }) - 0.05) < 1e-15);
    CHECK(std::abs(quad_integral(q3, [](double x, double y) { return x * x * y * y; }) -
                   1.0 / 180.0) < 1e-15);
}

TEST_CASE("polygon quadrature weights are positive and sum to the area") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(0.5, 1.5);
    for (int order = 1; order <= 3; ++order) {
        for (int trial = 0; trial < 100; ++trial) {
            Polygon p;
            const int n = 3 + trial % 6;
            const double r = unif(rng);
            for (int i = 0; i < n; ++i) {
                const double th = 2.0 * M_PI * i / n + 0.2 * (unif(rng) - 1.0);
                p.v.push_back({r * std::cos(th), r * std::sin(th)});
            }
            const QuadratureSet q = polygon_quadrature(p, order);
            double sw = 0;
            for (double w : q.w) {
                CHECK(w > 0.0);
                sw += w;
            }
            CHECK(std::abs(sw - p.signed_area()) < 1e-13 * std::abs(p.signed_area()));
        }
    }
}

TEST_CASE("quadrature on a square integrates xy") {
    const Polygon sq = make_box(0, 1, 0, 1);
    const QuadratureSet q = polygon_quadrature(sq, 2);
    CHECK(std::abs(quad_integral(q, [](double x, double y) { return x * y; }) - 0.25) < 1e-15);
}

TEST_CASE("gauss segments integrate signed polynomials") {
    double nodes[3], weights[3];

    gauss_segment(0.0, 1.0, 2, nodes, weights);
    double s = 0;
    for (int i = 0; i < 2; ++i) s += weights[i] * nodes[i] * nodes[i] * nodes[i];
    CHECK(std::abs(s - 0.25) < 1e-15);

    gauss_segment(1.0, 0.0, 2, nodes, weights);  // reversed: signed measure
    s = 0;
    for (int i = 0; i < 2; ++i) s += weights[i] * nodes[i] * nodes[i] * nodes[i];
    CHECK(std::abs(s + 0.25) < 1e-15);

    gauss_segment(0.0, 1.0, 3, nodes, weights);
    s = 0;
    for (int i = 0; i < 3; ++i) s += weights[i] * std::pow(nodes[i], 5);
    CHECK(std::abs(s - 1.0 / 6.0) < 1e-15);

    gauss_segment(-2.0, 3.0, 1, nodes, weights);
    CHECK(nodes[0] == 0.5);
    CHECK(weights[0] == 5.0);
}

TEST_CASE("segment intersection finds proper crossings only") {
    PlanePoint x;
    CHECK(segment_intersection({0, 0}, {1, 1}, {0, 1}, {1, 0}, x));
    CHECK(std::abs(x.a - 0.5) < 1e-15);
    CHECK(std::abs(x.b - 0.5) < 1e-15);

    CHECK_FALSE(segment_intersection({0, 0}, {1, 0}, {0, 1}, {1, 1}, x));  // parallel
    CHECK_FALSE(segment_intersection({0, 0}, {1, 0}, {2, 0}, {3, 0}, x));  // collinear
    CHECK_FALSE(segment_intersection({0, 0}, {1, 1}, {1, 1}, {2, 0}, x));  // endpoint touch
    CHECK_FALSE(segment_intersection({0, 0}, {1, 1}, {2, 0}, {3, -1}, x)); // disjoint
}

TEST_CASE("degenerate geometry inputs throw") {
    const Vec3 zero(0.0, 0.0, 0.0);
    CHECK_THROWS_AS(zero.normalized(), GeometryError);
    Polygon line;
    line.v = {{0, 0}, {1, 0}};
    CHECK_THROWS_AS(polygon_quadrature(line, 1), GeometryError);
}

} // TEST_SUITE
