#include <doctest.h>

#include "cdg/column.hpp"

using namespace cdg;

TEST_CASE("uniform columns stack to the requested depth") {
    ColumnGrid g = init_uniform_columns(3, 5, 1000.0);
    CHECK(g.ncells == 3);
    CHECK(g.nlayers == 5);
    for (int k = 0; k < 3; ++k) {
        CHECK(g.iface(k, 0) == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(g.iface(k, 5) == -1000.0);
        for (int l = 0; l < 5; ++l) CHECK(g.thickness(k, l) == 200.0);
        CHECK(g.zmid(k, 0) == doctest::Approx(-100.0));
        CHECK(g.zmid(k, 4) == doctest::Approx(-900.0));
    }
}

TEST_CASE("sea surface height offsets stretch the layers uniformly") {
    ColumnGrid g = init_uniform_columns(3, 4, 100.0, {10.0, 0.0, -5.0});
    CHECK(g.iface(0, 0) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(g.iface(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(g.iface(2, 0) == doctest::Approx(-5.0).epsilon(1e-14));
    CHECK(g.thickness(0, 0) == doctest::Approx(27.5));
    CHECK(g.thickness(2, 3) == doctest::Approx(23.75));
    for (int k = 0; k < 3; ++k) CHECK(g.iface(k, 4) == -100.0);
}

TEST_CASE("restack rebuilds interfaces from the stored bottom") {
    ColumnGrid g = init_uniform_columns(1, 3, 300.0);
    g.thickness(0, 1) = 150.0;  // total 100 + 150 + 100
    g.restack();
    CHECK(g.iface(0, 3) == -300.0);
    CHECK(g.iface(0, 2) == doctest::Approx(-200.0));
    CHECK(g.iface(0, 1) == doctest::Approx(-50.0));
    CHECK(g.iface(0, 0) == doctest::Approx(50.0));
    g.check();
}

TEST_CASE("invalid column setups are rejected") {
    CHECK_THROWS_AS(init_uniform_columns(0, 5, 100.0), ConfigError);
    CHECK_THROWS_AS(init_uniform_columns(4, 0, 100.0), ConfigError);
    CHECK_THROWS_AS(init_uniform_columns(4, 5, -1.0), ConfigError);
    CHECK_THROWS_AS(init_uniform_columns(3, 5, 100.0, {1.0, 2.0}), ConfigError);

    ColumnGrid g = init_uniform_columns(1, 2, 100.0);
    g.thickness(0, 0) = -1.0;
    CHECK_THROWS_AS(g.restack(), StateError);
    g.thickness(0, 0) = 50.0;
    g.iface(0, 1) = 10.0;  // above the surface
    CHECK_THROWS_AS(g.check(), StateError);
}
