#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "swarmfield/fokker_planck.hpp"
#include "swarmfield/grid.hpp"
#include "swarmfield/metrics.hpp"

using namespace swarmfield;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField cosine_density(const Grid& g, double amplitude) {
    return ScalarField::from_function(
        g, [&](Vec2 x) { return 1.0 + amplitude * std::cos(kPi * x[0]); });
}

// low-mode Fourier field with seeded coefficients, values within +-scale
ScalarField random_smooth(const Grid& g, std::uint64_t seed, double scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double a[3][3];
    for (auto& row : a)
        for (double& c : row) c = coef(rng);
    ScalarField f = ScalarField::from_function(g, [&](Vec2 x) {
        double s = 0.0;
        for (int kx = 0; kx < 3; ++kx)
            for (int ky = 0; ky < 3; ++ky)
                s += a[kx][ky] * std::cos(kPi * kx * x[0]) * std::cos(kPi * ky * x[1]);
        return s / 9.0 * scale;
    });
    return f;
}

}  // namespace

TEST_CASE("uniform density is stationary under pure diffusion") {
    const Grid g = Grid::make_2d(16, 16);
    const ScalarField p(g, 1.0);
    const ScalarField out = fp_step(p, VectorField(g), ScalarField(g, 0.01), 1e-3, {});
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(out[i] == p[i]);
}

TEST_CASE("mass is conserved to machine precision per step") {
    const Grid g = Grid::make_2d(24, 24);
    ScalarField p = ScalarField::from_function(g, [](Vec2 x) {
        return 1.0 + 0.8 * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    });

    VectorField v(g);
    v.component(0) = random_smooth(g, 5, 0.6);
    v.component(1) = random_smooth(g, 6, 0.6);
    ScalarField sigma = random_smooth(g, 7, 0.004);
    for (double& s : sigma.values()) s = std::abs(s) + 0.001;

    FpScheme scheme;
    for (int k = 0; k < 200; ++k) {
        const ScalarField next = fp_step(p, v, sigma, 2e-3, scheme);
        CHECK(std::abs(integrate(next) - integrate(p)) < 1e-13);
        p = next;
    }
}

TEST_CASE("1-D heat equation oracle: Neumann eigenmode decay") {
    // v = 0, sigma = 0.03: p(t) = 1 + 0.5 exp(-pi^2 sigma t) cos(pi x)
    const Grid g = Grid::make_1d(256);
    const double sigma = 0.03;
    ScalarField p = cosine_density(g, 0.5);

    FpScheme scheme;
    const double t_end = 1.0;
    p = fp_step(p, VectorField(g), ScalarField(g, sigma), t_end, scheme);

    const ScalarField exact = ScalarField::from_function(g, [&](Vec2 x) {
        return 1.0 + 0.5 * std::exp(-kPi * kPi * sigma * t_end) * std::cos(kPi * x[0]);
    });
    CHECK(l2_error(p, exact) < 1e-3);
}

TEST_CASE("auto step bound stays below both single-mechanism CFL limits") {
    // dt <= cfl_safety * min(dx / max|v|, dx^2 / (2 dim max sigma))
    const Grid g = Grid::make_2d(32, 32);
    VectorField v(g);
    v.component(0) = random_smooth(g, 71, 0.9);
    v.component(1) = random_smooth(g, 72, 0.9);
    ScalarField sigma = random_smooth(g, 73, 0.01);
    for (double& s : sigma.values()) s = std::abs(s) + 0.002;

    const double safety = 0.9;
    const double dt = stable_dt(v, sigma, 0.0, safety);
    const double dx = g.cell_width(0);
    const double vmax = std::max(max_abs(v.component(0)), max_abs(v.component(1)));
    CHECK(dt <= safety * dx / vmax);
    CHECK(dt <= safety * dx * dx / (2.0 * 2 * max_value(sigma)));
}

TEST_CASE("CFL violation is rejected in fixed mode") {
    const Grid g = Grid::make_1d(64);
    const ScalarField p(g, 1.0);
    FpScheme scheme;
    scheme.time_step_mode = FpScheme::TimeStepMode::fixed;
    // diffusion bound ~ 0.9 dx^2 / (2 sigma) = 3.7e-3 at sigma = 0.03
    CHECK_THROWS_AS((void)fp_step(p, VectorField(g), ScalarField(g, 0.03), 0.02, scheme),
                    std::invalid_argument);
    // the same dt passes in cfl_auto mode via substepping
    const ScalarField out = fp_step(p, VectorField(g), ScalarField(g, 0.03), 0.02, {});
    CHECK(all_finite(out));
}

TEST_CASE("upwind advection under the CFL bound preserves nonnegativity") {
    const Grid g = Grid::make_2d(32, 32);
    // sharp blob with exact zeros away from it
    ScalarField p(g, 0.0);
    for (int iy = 12; iy < 20; ++iy)
        for (int ix = 12; ix < 20; ++ix) p.at(ix, iy) = 1.0;
    const double mass = integrate(p);
    for (double& v : p.values()) v /= mass;

    VectorField v(g);
    v.component(0) = random_smooth(g, 31, 0.8);
    v.component(1) = random_smooth(g, 32, 0.8);
    const ScalarField sigma(g, 0.002);

    FpScheme scheme;
    for (int k = 0; k < 300; ++k) {
        p = fp_step(p, v, sigma, 1e-3, scheme);
        CHECK(min_value(p) >= 0.0);
    }
}

TEST_CASE("closed loop: the target is stationary") {
    const Grid g = Grid::make_2d(32, 32);
    ScalarField target = ScalarField::from_function(g, [](Vec2 x) {
        return 1.0 + 0.5 * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    });

    SUBCASE("sigma = 0: exact fixed point") {
        const ControlConfig cfg(g, 0.03, 0.0, target, std::nullopt);
        const ScalarField out = closed_loop_step(target, cfg, 0.02, {});
        CHECK(max_abs(out - target) <= 1e-12);
    }
    SUBCASE("sigma > 0: drift stays below 1e-8 per small step") {
        const ControlConfig cfg(g, 0.03, 0.0005, target, std::nullopt);
        const ScalarField out = closed_loop_step(target, cfg, 1e-5, {});
        CHECK(max_abs(out - target) <= 1e-8);
    }
}

TEST_CASE("closed loop: slowest mode decays at rate pi^2 alpha") {
    // 1-D, p* = 1, p0 = 1 + 0.3 cos(pi x), sigma = 0: exact Neumann
    // eigen-decay exp(-pi^2 alpha t) of the L2 error
    const Grid g = Grid::make_1d(128);
    const double alpha = 0.03;
    const ControlConfig cfg(g, alpha, 0.0, ScalarField(g, 1.0), std::nullopt);

    ScalarField p = cosine_density(g, 0.3);
    const double dt = 0.02;
    std::vector<std::pair<double, double>> series;
    const int steps = 150;  // t up to 3 ~ 1/(pi^2 alpha)
    for (int k = 0; k <= steps; ++k) {
        series.emplace_back(k * dt, l2_error(p, cfg.target()));
        if (k < steps) p = closed_loop_step(p, cfg, dt, {});
    }
    const double rate = fit_decay_rate(series);
    const double expected = kPi * kPi * alpha;
    CHECK(rate == doctest::Approx(expected).epsilon(0.05));

    // amplitude check against the closed form at the end of the window
    const double predicted = 0.3 * std::exp(-expected * steps * dt) / std::sqrt(2.0);
    CHECK(series.back().second == doctest::Approx(predicted).epsilon(0.02));
}

TEST_CASE("closed loop conserves mass over a long composition") {
    const Grid g = Grid::make_1d(64);
    const ControlConfig cfg(g, 0.03, 0.0, ScalarField(g, 1.0), std::nullopt);
    ScalarField p = cosine_density(g, 0.3);
    for (int k = 0; k < 1000; ++k) p = closed_loop_step(p, cfg, 0.005, {});
    CHECK(std::abs(integrate(p) - 1.0) <= 1e-10);
}

TEST_CASE("discrete energy dissipation along the closed loop") {
    const Grid g = Grid::make_2d(24, 24);
    ScalarField target = ScalarField::from_function(g, [](Vec2 x) {
        return 1.0 + 0.4 * std::cos(kPi * x[0]) * std::cos(kPi * x[1]);
    });
    const ControlConfig cfg(g, 0.03, 0.0005, target, std::nullopt);

    ScalarField p(g, 1.0);
    double prev = 0.5 * std::pow(l2_error(p, target), 2);
    for (int k = 0; k < 200; ++k) {
        p = closed_loop_step(p, cfg, 0.01, {});
        const double lyap = 0.5 * std::pow(l2_error(p, target), 2);
        CHECK(lyap <= prev + 1e-12);
        prev = lyap;
    }
}

TEST_CASE("central advection beats upwind on a smooth transport problem") {
    // rigid-ish drift of a wide bump; compare against a finer-grid solution
    const Grid g = Grid::make_1d(64);
    const Grid fine = Grid::make_1d(512);
    auto bump = [](Vec2 x) { return 1.0 + 0.5 * std::cos(kPi * x[0]); };
    auto vfun = [](Vec2 x) { return 0.25 * std::sin(kPi * x[0]); };

    auto solve = [&](const Grid& grid, FpScheme::Advection adv) {
        ScalarField p = ScalarField::from_function(grid, bump);
        VectorField v(grid);
        v.component(0) = ScalarField::from_function(grid, vfun);
        FpScheme scheme;
        scheme.advection = adv;
        // small fixed dt so the first-order time error does not mask the
        // spatial accuracy difference; sigma keeps the coarse cell Peclet
        // below 2 so central stays monotone
        const ScalarField sigma(grid, 0.003);
        for (int k = 0; k < 1000; ++k) p = fp_step(p, v, sigma, 5e-4, scheme);
        return p;
    };

    const ScalarField reference = solve(fine, FpScheme::Advection::central);
    auto coarsen_error = [&](const ScalarField& coarse) {
        double err = 0.0;
        for (int i = 0; i < 64; ++i) {
            double avg = 0.0;
            for (int j = 0; j < 8; ++j) avg += reference[i * 8 + j];
            err = std::max(err, std::abs(coarse[i] - avg / 8.0));
        }
        return err;
    };

    const double central_err = coarsen_error(solve(g, FpScheme::Advection::central));
    const double upwind_err = coarsen_error(solve(g, FpScheme::Advection::upwind));
    CHECK(central_err < upwind_err);
}

TEST_CASE("fokker_planck input validation") {
    const Grid g = Grid::make_1d(32);
    const ScalarField p(g, 1.0);
    CHECK_THROWS_AS((void)fp_step(p, VectorField(g), ScalarField(g, -0.01), 1e-3, {}),
                    std::invalid_argument);
    const ScalarField not_normalized(g, 2.0);
    CHECK_THROWS_AS((void)fp_step(not_normalized, VectorField(g), ScalarField(g, 0.01),
                                  1e-3, {}),
                    std::invalid_argument);
    ScalarField negative = p;
    negative[3] = -0.5;
    negative[4] = 2.5;  // keep unit mass
    CHECK_THROWS_AS((void)fp_step(negative, VectorField(g), ScalarField(g, 0.01), 1e-3, {}),
                    std::invalid_argument);
}
