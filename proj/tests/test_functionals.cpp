#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "dfem/functionals.hpp"
#include "dfem/radial_oracle.hpp"

using namespace dfem;

namespace {

WeightSpec weight(double alpha, double eps = 0.0) {
    WeightSpec w;
    w.alpha = alpha;
    w.epsilon = eps;
    w.dimension = 2;
    w.domain_bound = 2.0;
    return w;
}

const Mesh& shared_mesh() {
    static const Mesh mesh = build_disc_mesh(1.0, 0.05, 2.0);
    return mesh;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

TEST_CASE("sphere mass: closed forms and monotonicity") {
    const Field one = make_field(shared_mesh(), [](Vec2) { return 1.0; });
    const WeightSpec w = weight(1.0);
    // ∫_{B_r} |x| = 2 pi r^3 / 3.
    CHECK(sphere_mass(one, w, 1.0) == doctest::Approx(2.0 * kPi / 3.0).epsilon(2e-3));
    CHECK(sphere_mass(one, w, 0.5) ==
          doctest::Approx(2.0 * kPi * 0.125 / 3.0).epsilon(2e-3));
    CHECK(sphere_mass(one, w, 0.5) <= sphere_mass(one, w, 1.0));

    const Field zero = zero_field(shared_mesh());
    CHECK(sphere_mass(zero, w, 0.7) == 0.0);
    CHECK_THROWS_AS(sphere_mass(one, w, 1.5), std::domain_error);
}

TEST_CASE("kernelized energy against the mode closed form") {
    const ModeSolution mode = ModeSolution::make(2, 1.0, 1);
    const Field f = exact_mode_field(shared_mesh(), mode);
    const WeightSpec w = weight(1.0);

    const Field one = make_field(shared_mesh(), [](Vec2) { return 1.0; });
    CHECK(dirichlet_kernel(one, w, 0.5) <= 1e-20);

    for (double r : {0.3, 0.5, 0.8}) {
        const auto mf = mode_functionals(mode, r);
        CHECK(dirichlet_kernel(f, w, r) == doctest::Approx(mf.D).epsilon(2e-2));
        CHECK(sphere_mass(f, w, r) == doctest::Approx(mf.H).epsilon(2e-2));
        CHECK(dirichlet_kernel(f, w, r) >= 0.0);
    }
}

TEST_CASE("frequency of modes and conventions") {
    const WeightSpec w = weight(1.0);
    const Field one = make_field(shared_mesh(), [](Vec2) { return 1.0; });
    CHECK(frequency(one, w, 0.6) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(frequency(zero_field(shared_mesh()), w, 0.6) == 0.0);

    const ModeSolution mode = ModeSolution::make(2, 1.0, 1);
    const Field f = exact_mode_field(shared_mesh(), mode);
    for (double r : {0.15, 0.5, 0.85})
        CHECK(frequency(f, w, r) == doctest::Approx(2.0 * mode.beta).epsilon(1e-2));
}

TEST_CASE("remainder closed form and bounds") {
    const Field one = make_field(shared_mesh(), [](Vec2) { return 1.0; });
    const WeightSpec w = weight(1.0, 0.3);

    // Independent reduction of (1/2) eps^2 ∫_{B_eps} (3/4 rho^2 + eps^2/4)^{-1/2}:
    // radial quadrature gives (2 pi / 3) eps^3.
    const double eps = 0.3;
    const double oracle =
        0.5 * eps * eps *
        simpson(
            [&](double rho) {
                return kTwoPi * rho / std::sqrt(0.75 * rho * rho + 0.25 * eps * eps);
            },
            0.0, eps, 2000);
    CHECK(oracle == doctest::Approx(2.0 * kPi * eps * eps * eps / 3.0).epsilon(1e-10));
    CHECK(remainder(one, w) == doctest::Approx(oracle).epsilon(5e-3));

    CHECK(remainder(zero_field(shared_mesh()), w) == 0.0);
    CHECK_THROWS_AS(remainder(one, weight(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(remainder(one, weight(1.0, 1e-4)), std::runtime_error);

    // (alpha/2) H_eps(eps) <= R_eps <= 2 alpha H_eps(eps) on random fields.
    for (unsigned seed : {3u, 4u, 5u}) {
        const Field f = random_interior_field(shared_mesh(), seed);
        for (double alpha : {0.5, 1.0, 1.5}) {
            const WeightSpec we = weight(alpha, 0.25);
            const double R = remainder(f, we);
            const double Heps = sphere_mass(f, we, we.epsilon);
            CHECK(R >= 0.5 * alpha * Heps * (1.0 - 1e-9));
            CHECK(R <= 2.0 * alpha * Heps * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("hardy report") {
    const WeightSpec w = weight(1.0, 1.0 / 8.0);
    const Field zero = zero_field(shared_mesh());
    const HardyReport zr = hardy_report(zero, w);
    CHECK(zr.ratio_gradient_form == 0.0);
    CHECK(zr.ratio_l2_form == 0.0);
    CHECK(zr.ratio_reg_gradient_form == 0.0);
    CHECK(zr.ratio_reg_l2_form == 0.0);

    // Tent at one interior node.
    Field tent = zero_field(shared_mesh());
    tent.values[25] = 1.0;
    const HardyReport tr = hardy_report(tent, w);
    CHECK(tr.ratio_l2_form <= 1.0);

    for (unsigned seed : {21u, 22u}) {
        const Field f = random_interior_field(shared_mesh(), seed);
        const HardyReport r = hardy_report(f, w);
        for (double ratio : {r.ratio_gradient_form, r.ratio_l2_form,
                             r.ratio_reg_gradient_form, r.ratio_reg_l2_form}) {
            CHECK(ratio > 0.0);
            CHECK(ratio <= 1.02);
        }
    }

    Field bad = zero_field(shared_mesh());
    bad.values[bad.values.size() - 1] = 1.0; // outer ring node
    CHECK_THROWS_AS(hardy_report(bad, w), std::invalid_argument);
}

TEST_CASE("profiles") {
    const WeightSpec w = weight(1.0);
    const Field one = make_field(shared_mesh(), [](Vec2) { return 1.0; });
    const std::vector<double> grid = {0.2, 0.35, 0.5, 0.65, 0.8};
    const auto prof = profile(one, w, grid);
    REQUIRE(prof.size() == grid.size());
    for (std::size_t i = 0; i + 1 < prof.size(); ++i) CHECK(prof[i].H < prof[i + 1].H);
    for (const auto& s : prof) {
        CHECK(s.D <= 1e-20);
        CHECK(s.Phi <= 1e-12);
        CHECK(s.R_eps == 0.0);
    }

    // log H is affine in log r with slope N + alpha + 2 beta on a mode.
    const ModeSolution mode = ModeSolution::make(2, 0.5, 2);
    const Field f = exact_mode_field(shared_mesh(), ModeSolution::make(2, 0.5, 2));
    const auto mp = profile(f, weight(0.5), grid);
    const double slope_exact = 2.0 + 0.5 + 2.0 * mode.beta;
    for (std::size_t i = 0; i + 1 < mp.size(); ++i) {
        const double slope = (std::log(mp[i + 1].H) - std::log(mp[i].H)) /
                             (std::log(grid[i + 1]) - std::log(grid[i]));
        CHECK(slope == doctest::Approx(slope_exact).epsilon(2e-2));
    }

    CHECK(profile(one, w, {}).empty());
    CHECK_THROWS_AS(profile(one, w, {0.5, 0.4}), std::invalid_argument);
}

TEST_CASE("kernel energy agrees with the integrated derivative route") {
    const ModeSolution mode = ModeSolution::make(2, 1.0, 1);
    const Field f = exact_mode_field(shared_mesh(), mode);
    const WeightSpec w = weight(1.0);
    const double r = 0.7;
    // D(r) = ∫_0^r 2 s E(s) ds with E(s) = ∫_{B_s} w |grad v|^2.
    const int n = 28;
    std::vector<double> s_grid, integrand;
    for (int i = 0; i <= n; ++i) {
        const double s = r * i / n;
        s_grid.push_back(s);
        integrand.push_back(s == 0.0 ? 0.0 : 2.0 * s * gradient_energy(f, w, s));
    }
    double integral = 0.0; // trapezoid
    for (int i = 0; i < n; ++i)
        integral += 0.5 * (integrand[i] + integrand[i + 1]) * (s_grid[i + 1] - s_grid[i]);
    CHECK(dirichlet_kernel(f, w, r) == doctest::Approx(integral).epsilon(2e-2));
}
