#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "swarmfield/grid.hpp"
#include "swarmfield/sde.hpp"

using namespace swarmfield;

TEST_CASE("sampling and stepping are deterministic under a fixed seed") {
    const SwarmState a = sample_initial(4, 2, 7);
    const SwarmState b = sample_initial(4, 2, 7);
    REQUIRE(a.positions.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(a.positions[i][0] == b.positions[i][0]);
        CHECK(a.positions[i][1] == b.positions[i][1]);
    }

    const Grid g = Grid::make_2d(8, 8);
    VectorField v(g);
    for (double& x : v.component(0).values()) x = 0.3;
    const ScalarField sigma(g, 0.01);
    const SwarmState sa = step(step(a, v, sigma, 0.02), v, sigma, 0.02);
    const SwarmState sb = step(step(b, v, sigma, 0.02), v, sigma, 0.02);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(sa.positions[i][0] == sb.positions[i][0]);
        CHECK(sa.positions[i][1] == sb.positions[i][1]);
    }
    CHECK(sa.step_count == 2);
}

TEST_CASE("zero dynamics leave positions unchanged and advance time") {
    const Grid g = Grid::make_2d(8, 8);
    const SwarmState s0 = sample_initial(16, 2, 3);
    const SwarmState s1 = step(s0, VectorField(g), ScalarField(g, 0.0), 0.02);
    CHECK(s1.time == doctest::Approx(0.02));
    for (std::size_t i = 0; i < s0.positions.size(); ++i) {
        CHECK(s1.positions[i][0] == s0.positions[i][0]);
        CHECK(s1.positions[i][1] == s0.positions[i][1]);
    }
}

TEST_CASE("drift-only step moves by v dt") {
    const Grid g = Grid::make_2d(8, 8);
    VectorField v(g);
    for (double& x : v.component(0).values()) x = 1.0;

    SwarmState s;
    s.dim = 2;
    s.positions = {{0.5, 0.5}};
    const SwarmState s1 = step(s, v, ScalarField(g, 0.0), 0.02);
    CHECK(s1.positions[0][0] == doctest::Approx(0.52).epsilon(1e-13));
    CHECK(s1.positions[0][1] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("specular reflection folds an overshoot back inside") {
    const Grid g = Grid::make_2d(8, 8);
    VectorField v(g);
    for (double& x : v.component(0).values()) x = 1.0;

    SwarmState s;
    s.dim = 2;
    s.positions = {{0.98, 0.5}};
    // proposed x = 0.98 + 0.04 = 1.02 -> reflected to 0.98
    const SwarmState s1 = step(s, v, ScalarField(g, 0.0), 0.04);
    CHECK(s1.positions[0][0] == doctest::Approx(0.98).epsilon(1e-13));
}

TEST_CASE("containment: every position stays inside the closed box") {
    const Grid g = Grid::make_2d(8, 8);
    VectorField v(g);
    for (double& x : v.component(0).values()) x = 2.0;
    for (double& x : v.component(1).values()) x = -1.5;
    const ScalarField sigma(g, 0.05);

    SwarmState s = sample_initial(256, 2, 11);
    for (int k = 0; k < 200; ++k) {
        s = step(s, v, sigma, 0.02);
        for (const Vec2& p : s.positions) {
            CHECK(p[0] >= 0.0);
            CHECK(p[0] <= 1.0);
            CHECK(p[1] >= 0.0);
            CHECK(p[1] <= 1.0);
        }
    }
}

TEST_CASE("uniform sampling concentrates around the box center") {
    const SwarmState s = sample_initial(10000, 2, 5);
    double mx = 0.0, my = 0.0;
    for (const Vec2& p : s.positions) {
        mx += p[0];
        my += p[1];
    }
    mx /= 10000.0;
    my /= 10000.0;
    CHECK(mx > 0.48);
    CHECK(mx < 0.52);
    CHECK(my > 0.48);
    CHECK(my < 0.52);
}

TEST_CASE("rejection sampling from a uniform field matches the uniform spec") {
    // KS statistic of each coordinate against U(0,1), 1% critical value
    const Grid g = Grid::make_2d(16, 16);
    const ScalarField uniform(g, 1.0);
    const int n = 2000;
    const SwarmState s = sample_initial(n, uniform, 99);

    for (int ax = 0; ax < 2; ++ax) {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = s.positions[i][ax];
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            ks = std::max(ks, std::abs((i + 1.0) / n - xs[i]));
            ks = std::max(ks, std::abs(xs[i] - static_cast<double>(i) / n));
        }
        const double critical = 1.628 / std::sqrt(static_cast<double>(n));
        CHECK(ks < critical);
    }
}

TEST_CASE("rejection sampling follows a nonuniform density") {
    // twice the mass on the left half: the sample split should see it
    const Grid g = Grid::make_1d(64);
    ScalarField f = ScalarField::from_function(
        g, [](Vec2 x) { return x[0] < 0.5 ? 2.0 : 1.0; });
    const double mass = integrate(f);
    for (double& v : f.values()) v /= mass;

    const SwarmState s = sample_initial(6000, f, 17);
    int left = 0;
    for (const Vec2& p : s.positions) left += p[0] < 0.5 ? 1 : 0;
    const double frac = static_cast<double>(left) / 6000.0;
    CHECK(frac > 0.62);  // expected 2/3, binomial std ~ 0.006
    CHECK(frac < 0.71);
}

TEST_CASE("diffusion calibration: variance grows like 2 sigma t") {
    const Grid g = Grid::make_2d(8, 8);
    const double sigma = 0.001;
    const double dt = 0.01;
    const int steps = 50;  // t = 0.5, spread ~ 0.03, reflections essentially never

    SwarmState s;
    s.dim = 2;
    s.seed = 23;
    s.positions.assign(10000, Vec2{0.5, 0.5});
    const ScalarField sig(g, sigma);
    const VectorField v(g);
    for (int k = 0; k < steps; ++k) s = step(s, v, sig, dt);

    const double t = steps * dt;
    for (int ax = 0; ax < 2; ++ax) {
        double mean = 0.0;
        for (const Vec2& p : s.positions) mean += p[ax];
        mean /= static_cast<double>(s.positions.size());
        double var = 0.0;
        for (const Vec2& p : s.positions) var += (p[ax] - mean) * (p[ax] - mean);
        var /= static_cast<double>(s.positions.size() - 1);
        CHECK(var == doctest::Approx(2.0 * sigma * t).epsilon(0.10));
    }
}

TEST_CASE("sde input validation") {
    const Grid g = Grid::make_2d(8, 8);
    SwarmState s = sample_initial(4, 2, 1);

    ScalarField negative_sigma(g, -0.1);
    CHECK_THROWS_AS((void)step(s, VectorField(g), negative_sigma, 0.01),
                    std::invalid_argument);

    VectorField bad_v(g);
    bad_v.component(0).at(2, 2) = std::nan("");
    CHECK_THROWS_AS((void)step(s, bad_v, ScalarField(g, 0.0), 0.01), std::invalid_argument);

    CHECK_THROWS_AS((void)step(s, VectorField(g), ScalarField(g, 0.0), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(sample_initial(0, 2, 1), std::invalid_argument);
}
