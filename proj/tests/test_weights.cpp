#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

#include "dfem/weights.hpp"

using namespace dfem;

namespace {

WeightSpec spec(double alpha, double eps) {
    WeightSpec w;
    w.alpha = alpha;
    w.epsilon = eps;
    w.dimension = 2;
    w.domain_bound = 2.0;
    return w;
}

}  // namespace

TEST_CASE("weight value: degenerate and regularized branches") {
    CHECK(weight_value(spec(1.0, 0.0), {0.0, 0.0}) == 0.0);
    CHECK(weight_value(spec(1.0, 0.1), {0.0, 0.0}) == doctest::Approx(0.05).epsilon(1e-14));
    // Continuity at the seam: both branches give eps^alpha.
    CHECK(weight_value(spec(1.0, 0.1), {0.1, 0.0}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(weight_value(spec(0.7, 0.0), {0.3, 0.4}) ==
          doctest::Approx(std::pow(0.5, 0.7)).epsilon(1e-14));
}

TEST_CASE("weight gradient branches") {
    const Vec2 g1 = weight_gradient(spec(1.0, 0.0), {1.0, 0.0});
    CHECK(g1.x == doctest::Approx(1.0));
    CHECK(g1.y == doctest::Approx(0.0));

    const Vec2 g0 = weight_gradient(spec(1.0, 0.1), {0.0, 0.0});
    CHECK(g0.x == 0.0);
    CHECK(g0.y == 0.0);

    // At |x| = eps the inner branch applies and is 3/4 of the outer one.
    const Vec2 gi = weight_gradient(spec(1.0, 0.1), {0.1, 0.0});
    CHECK(gi.x == doctest::Approx(0.75).epsilon(1e-12));
    const Vec2 go = weight_gradient(spec(1.0, 0.1), {0.1000000001, 0.0});
    CHECK(go.x == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(weight_gradient(spec(0.5, 0.0), {0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(weight_gradient(spec(1.0, 0.0), {0.0, 0.0}), std::domain_error);
    const Vec2 gz = weight_gradient(spec(1.5, 0.0), {0.0, 0.0});
    CHECK(gz.x == 0.0);
}

TEST_CASE("hardy constants") {
    const auto c1 = hardy_constant(spec(1.0, 0.0));
    CHECK(c1.gradient_form == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(c1.l2_form == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));

    WeightSpec w3 = spec(0.5, 0.0);
    w3.dimension = 3;
    CHECK(hardy_constant(w3).gradient_form == doctest::Approx(2.0 / 1.5).epsilon(1e-14));

    CHECK(hardy_constant(spec(2.0 - 1e-12, 0.0)).gradient_form ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("regularization dominates the degenerate weight") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-0.5, 0.5);
    for (double alpha : {0.3, 1.0, 1.7}) {
        const WeightSpec we = spec(alpha, 0.2);
        const WeightSpec w0 = spec(alpha, 0.0);
        for (int i = 0; i < 200; ++i) {
            const Vec2 x{pos(rng), pos(rng)};
            CHECK(weight_value(we, x) >= weight_value(w0, x));
        }
        // Quoted bounds on the regularized ball.
        for (int i = 0; i < 50; ++i) {
            const double r = 0.2 * i / 49.0;
            const double v = weight_value_radial(we, r);
            CHECK(v >= std::pow(0.1, alpha) * (1.0 - 1e-14));
            CHECK(v <= std::pow(0.2, alpha) * (1.0 + 1e-14));
        }
    }
}

TEST_CASE("radial monotonicity and seam continuity") {
    const WeightSpec w = spec(0.8, 0.15);
    double prev = -1.0;
    for (int i = 0; i <= 300; ++i) {
        const double v = weight_value_radial(w, 0.6 * i / 300.0);
        CHECK(v >= prev);
        prev = v;
    }
    const double inner = weight_value_radial(w, std::nextafter(0.15, 0.0));
    const double outer = weight_value_radial(w, std::nextafter(0.15, 1.0));
    const double seam = weight_value_radial(w, 0.15);
    CHECK(std::abs(inner - seam) <= 4.0 * std::abs(seam) * 1e-16);
    CHECK(std::abs(outer - seam) <= 4.0 * std::abs(seam) * 1e-16);
}

TEST_CASE("pointwise convergence to the degenerate weight") {
    const Vec2 x{0.21, 0.0};
    for (int k = 5; k <= 64; k *= 2) {
        const double v = weight_value(spec(1.3, 1.0 / k), x);
        CHECK(v == std::pow(0.21, 1.3)); // exactly the outer branch once 1/k < |x|
    }
}

TEST_CASE("weight spec validation") {
    CHECK_THROWS_WITH_AS(spec(2.5, 0.0).validate(), "alpha must lie in (0,2)",
                         std::invalid_argument);
    CHECK_THROWS_AS(spec(1.0, -0.1).validate(), std::invalid_argument);
    WeightSpec bad_m = spec(1.0, 0.0);
    bad_m.domain_bound = 0.5;
    CHECK_THROWS_AS(bad_m.validate(), std::invalid_argument);
    CHECK_THROWS_AS(spec(1.0, 1.5).validate(), std::invalid_argument); // eps >= m-1
    CHECK_NOTHROW(spec(1.0, 0.5).validate());
}
