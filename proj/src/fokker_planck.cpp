#include "swarmfield/fokker_planck.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmfield {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void validate_inputs(const ScalarField& p, const VectorField& v, const ScalarField& sigma) {
    require(v.grid() == p.grid() && sigma.grid() == p.grid(),
            "fokker_planck: p, v, sigma must share one grid");
    require(min_value(sigma) >= 0.0, "fokker_planck: sigma must be nonnegative");
    require(all_finite(v) && all_finite(sigma) && all_finite(p),
            "fokker_planck: nonfinite input field");
    require(min_value(p) >= 0.0, "fokker_planck: density must be nonnegative");
    require(std::abs(integrate(p) - 1.0) <= 1e-8,
            "fokker_planck: density must integrate to 1");
}

// Flux sweep along one axis; the same line walk as the grid stencils.
struct AxisView {
    int n;
    std::size_t stride;
    int line_count;
    std::size_t line_stride;
};

AxisView axis_view(const Grid& g, int axis) {
    const int nx = g.cells(0);
    const int ny = g.cells(1);
    if (axis == 0) return {nx, 1, ny, static_cast<std::size_t>(nx)};
    return {ny, static_cast<std::size_t>(nx), nx, 1};
}

// Accumulates -dt/dx * (flux divergence) into `out` for one axis. Interior
// faces only: boundary faces carry exactly zero flux, so each line's fluxes
// telescope and total mass is unchanged.
void add_flux_divergence(ScalarField& out, const ScalarField& p, const ScalarField& q,
                         const ScalarField& vax, int axis, double dt,
                         FpScheme::Advection advection) {
    const Grid& g = out.grid();
    const AxisView view = axis_view(g, axis);
    const double dx = g.cell_width(axis);
    const double dt_dx = dt / dx;
    const bool upwind = advection == FpScheme::Advection::upwind;

    const double* pv = p.values().data();
    const double* qv = q.values().data();
    const double* vv = vax.values().data();
    double* ov = out.values().data();

    for (int l = 0; l < view.line_count; ++l) {
        const std::size_t off = l * view.line_stride;
        for (int i = 0; i + 1 < view.n; ++i) {
            const std::size_t a = off + i * view.stride;
            const std::size_t b = a + view.stride;
            const double vf = 0.5 * (vv[a] + vv[b]);
            const double adv =
                upwind ? vf * (vf > 0.0 ? pv[a] : pv[b]) : vf * 0.5 * (pv[a] + pv[b]);
            const double diff = (qv[b] - qv[a]) / dx;
            const double flux = dt_dx * (adv - diff);
            ov[a] -= flux;
            ov[b] += flux;
        }
    }
}

ScalarField single_step(const ScalarField& p, const VectorField& v,
                        const ScalarField& sigma, double dt, FpScheme::Advection advection) {
    const ScalarField q = sigma * p;
    ScalarField out = p;
    for (int ax = 0; ax < p.grid().dim(); ++ax)
        add_flux_divergence(out, p, q, v.component(ax), ax, dt, advection);
    return out;
}

}  // namespace

double stable_dt(const VectorField& v, const ScalarField& sigma, double extra_diffusion,
                 double cfl_safety) {
    require(cfl_safety > 0.0 && cfl_safety <= 1.0,
            "fokker_planck: cfl_safety must be in (0, 1]");
    const Grid& g = v.grid();
    const double diff_coef = max_value(sigma) + extra_diffusion;
    double rate = 0.0;
    for (int ax = 0; ax < g.dim(); ++ax) {
        const double dx = g.cell_width(ax);
        rate += max_abs(v.component(ax)) / dx;
        rate += 2.0 * diff_coef / (dx * dx);
    }
    if (rate <= 0.0) return std::numeric_limits<double>::infinity();
    return cfl_safety / rate;
}

ScalarField fp_step(const ScalarField& p, const VectorField& v, const ScalarField& sigma,
                    double dt, const FpScheme& scheme) {
    require(dt > 0.0, "fokker_planck: dt must be > 0");
    validate_inputs(p, v, sigma);

    const double bound = stable_dt(v, sigma, 0.0, scheme.cfl_safety);
    if (scheme.time_step_mode == FpScheme::TimeStepMode::fixed) {
        if (dt > bound)
            throw std::invalid_argument(
                "fokker_planck: dt violates the CFL bound (unstable configuration)");
        return single_step(p, v, sigma, dt, scheme.advection);
    }

    const double raw_count = std::isfinite(bound) ? std::ceil(dt / bound) : 1.0;
    if (raw_count > 5e7)
        throw std::invalid_argument(
            "fokker_planck: step would need more than 5e7 substeps; refine dt or the grid");
    const int nsub = std::max(1, static_cast<int>(raw_count));
    const double h = dt / nsub;
    ScalarField out = p;
    for (int k = 0; k < nsub; ++k) out = single_step(out, v, sigma, h, scheme.advection);
    return out;
}

ScalarField closed_loop_step(const ScalarField& p, const ControlConfig& cfg, double dt,
                             const FpScheme& scheme) {
    require(dt > 0.0, "fokker_planck: dt must be > 0");
    require(min_value(p) > 0.0, "fokker_planck: closed loop needs p > 0");

    const double alpha_max = max_value(cfg.alpha());

    if (scheme.time_step_mode == FpScheme::TimeStepMode::fixed) {
        const VectorField v = velocity_from_true_density(p, cfg);
        const double bound = stable_dt(v, cfg.sigma(), alpha_max, scheme.cfl_safety);
        if (dt > bound)
            throw std::invalid_argument(
                "fokker_planck: dt violates the closed-loop CFL bound");
        return single_step(p, v, cfg.sigma(), dt, scheme.advection);
    }

    ScalarField out = p;
    double remaining = dt;
    while (remaining > 0.0) {
        const VectorField v = velocity_from_true_density(out, cfg);
        const double bound = stable_dt(v, cfg.sigma(), alpha_max, scheme.cfl_safety);
        const double h = std::min(remaining, bound);
        out = single_step(out, v, cfg.sigma(), h, scheme.advection);
        remaining -= h;
    }
    return out;
}

}  // namespace swarmfield
