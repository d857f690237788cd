#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "randsubst/numerics.hpp"

using namespace randsubst;

TEST_CASE("geom_sum matches the quotient form away from 1") {
    CHECK(geom_sum(0.5, 4) == doctest::Approx(1.875).epsilon(1e-14));
    CHECK(geom_sum(2.0, 10) == doctest::Approx(1023.0).epsilon(1e-14));
    CHECK(geom_sum(3.0, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(geom_sum(0.25, 0) == 0.0);
    CHECK(geom_sum(0.0, 7) == 1.0);
}

TEST_CASE("geom_sum at the removable point equals the term count") {
    CHECK(geom_sum(1.0, 12) == 12.0);
    CHECK(geom_sum(1.0 + 5e-9, 10) == doctest::Approx(10.0).epsilon(1e-7));
    CHECK(geom_sum(1.0 - 5e-9, 10) == doctest::Approx(10.0).epsilon(1e-7));
}

TEST_CASE("geom_sum overflows to +inf instead of garbage") {
    CHECK(std::isinf(geom_sum(2.0, 2000)));
    CHECK(geom_sum(2.0, 2000) > 0.0);
}

TEST_CASE("Kahan accumulation keeps a long constant sum tight") {
    KahanAccumulator acc;
    const int n = 10000000;
    for (int j = 0; j < n; ++j) acc.add(0.1);
    CHECK(acc.value() == doctest::Approx(0.1 * n).epsilon(1e-14));
}

TEST_CASE("bisect finds a bracketed root") {
    auto f = [](double x) { return x * x - 2.0; };
    CHECK(bisect(f, 0.0, 2.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("bisect rejects endpoints of equal sign") {
    auto f = [](double x) { return x * x - 2.0; };
    CHECK_THROWS_AS(bisect(f, 2.0, 3.0), std::invalid_argument);
}

TEST_CASE("bisect returns an endpoint that is already a root") {
    auto f = [](double x) { return x - 1.0; };
    CHECK(bisect(f, 1.0, 2.0) == 1.0);
    CHECK(bisect(f, 0.0, 1.0) == 1.0);
}

TEST_CASE("golden_section_max locates a smooth interior maximum") {
    auto f = [](double x) { return x * (1.0 - x); };
    CHECK(golden_section_max(f, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("golden_section_max handles an off-centre maximum") {
    auto f = [](double x) { return -(x - 0.9) * (x - 0.9); };
    CHECK(golden_section_max(f, 0.0, 1.0) == doctest::Approx(0.9).epsilon(1e-8));
}

TEST_CASE("nelder_mead_2d descends a quadratic bowl") {
    auto f = [](double x, double y) {
        return (x - 1.5) * (x - 1.5) + 3.0 * (y + 0.25) * (y + 0.25);
    };
    SimplexResult r = nelder_mead_2d(f, 0.0, 0.0);
    CHECK(r.converged);
    CHECK(r.x == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(r.y == doctest::Approx(-0.25).epsilon(1e-6));
    CHECK(r.value < 1e-10);
}

TEST_CASE("nelder_mead_2d reports a spent budget as non-convergence") {
    auto f = [](double x, double y) { return x * x + y * y; };
    SimplexResult r = nelder_mead_2d(f, 5.0, 5.0, 0.1, 1e-10, 10);
    CHECK_FALSE(r.converged);
    CHECK(r.evaluations <= 10 + 4);
}
