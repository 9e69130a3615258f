#include "swarmfield/run_loop.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "swarmfield/control.hpp"
#include "swarmfield/fokker_planck.hpp"
#include "swarmfield/io.hpp"
#include "swarmfield/kde.hpp"
#include "swarmfield/sde.hpp"

namespace swarmfield {

namespace {

Grid make_grid(const SimConfig& cfg) {
    return cfg.dim == 1 ? Grid::make_1d(cfg.cells) : Grid::make_2d(cfg.cells, cfg.cells);
}

int step_count(const SimConfig& cfg) {
    const int n = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    return std::max(n, 1);
}

bool snapshot_due(const SimConfig& cfg, int k) {
    return !cfg.out_dir.empty() && cfg.snapshot_interval > 0 &&
           k % cfg.snapshot_interval == 0;
}

std::filesystem::path out_path(const SimConfig& cfg, const std::string& name) {
    return std::filesystem::path(cfg.out_dir) / name;
}

[[noreturn]] void abort_with_dump(const SimConfig& cfg, int k, double t,
                                  const ScalarField& density, const VectorField& v,
                                  const char* what) {
    std::string msg = std::string("run: nonfinite ") + what + " at step " +
                      std::to_string(k) + " (t=" + std::to_string(t) + ")";
    if (!cfg.out_dir.empty()) {
        const std::string tag = "dump_step_" + std::to_string(k);
        write_scalar_csv(density, out_path(cfg, tag + "_density.csv"));
        write_vector_csv(v, out_path(cfg, tag + "_velocity.csv"));
        msg += ", fields dumped to " + cfg.out_dir;
    }
    throw std::runtime_error(msg);
}

DiagnosticsRow make_row(double t, const ScalarField& density, const ScalarField& target,
                        const VectorField& v, double d_value) {
    DiagnosticsRow row;
    row.t = t;
    row.l2_error = l2_error(density, target);
    row.lyapunov = 0.5 * row.l2_error * row.l2_error;
    row.d = d_value;
    row.mass = integrate(density);
    row.min_density = min_value(density);
    row.max_speed = max_speed(v);
    return row;
}

void finish_outputs(const SimConfig& cfg, const RunResult& result) {
    if (cfg.out_dir.empty()) return;
    write_diagnostics_csv(result.diagnostics, out_path(cfg, "diagnostics.csv"));
    write_scalar_csv(result.density, out_path(cfg, "density_final.csv"));
    write_vector_csv(result.velocity, out_path(cfg, "velocity_final.csv"));
    emit_heatmap(result.density, out_path(cfg, "density_final.pgm"));
}

}  // namespace

RunResult run_agent_loop(const SimConfig& cfg) {
    cfg.validate();
    const Grid grid = make_grid(cfg);
    const ScalarField target = realize_density(cfg.target, grid);
    const ScalarField sigma_field = realize_coefficient(cfg.sigma, cfg.sigma_file, grid);
    const ScalarField alpha_field = realize_coefficient(cfg.alpha, cfg.alpha_file, grid);
    const ControlConfig control(alpha_field, sigma_field, target, cfg.velocity_cap);

    SwarmState state = cfg.initial.type == DensitySpec::Type::uniform
                           ? sample_initial(cfg.n_agents, cfg.dim, cfg.seed)
                           : sample_initial(cfg.n_agents, realize_density(cfg.initial, grid),
                                            cfg.seed);

    const int steps = step_count(cfg);
    Diagnostics diag;
    diag.rows.reserve(steps + 1);

    DensityEstimate estimate = estimate_density(state.positions, grid, cfg.kde);
    VectorField v = velocity_from_estimate(estimate, control);

    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        if (!all_finite(estimate.field) || !all_finite(v))
            abort_with_dump(cfg, k, t, estimate.field, v, "field");

        diag.rows.push_back(make_row(t, estimate.field, target, v, 0.0));
        if (snapshot_due(cfg, k)) {
            const std::string tag = "step_" + std::to_string(k);
            write_positions_csv(state, out_path(cfg, tag + "_positions.csv"));
            write_scalar_csv(estimate.field, out_path(cfg, tag + "_density.csv"));
            write_vector_csv(v, out_path(cfg, tag + "_velocity.csv"));
            write_pgm(estimate.field, out_path(cfg, tag + "_density.pgm"));
        }
        if (k == steps) break;

        state = step(state, v, sigma_field, cfg.dt);
        estimate = estimate_density(state.positions, grid, cfg.kde);
        v = velocity_from_estimate(estimate, control);
    }

    RunResult result{std::move(diag), std::move(estimate.field), std::move(v)};
    finish_outputs(cfg, result);
    return result;
}

RunResult run_pde_loop(const SimConfig& cfg) {
    cfg.validate();
    const Grid grid = make_grid(cfg);
    const ScalarField target = realize_density(cfg.target, grid);
    const ControlConfig control(realize_coefficient(cfg.alpha, cfg.alpha_file, grid),
                                realize_coefficient(cfg.sigma, cfg.sigma_file, grid),
                                target, cfg.velocity_cap);

    ScalarField p = realize_density(cfg.initial, grid);
    if (!(min_value(p) > 0.0))
        throw std::invalid_argument("run: PDE loop needs a positive initial density");

    const bool injecting = cfg.error_injection.mode != ErrorInjection::Mode::none;
    const ScalarField eps = injecting ? injected_epsilon(cfg.error_injection, grid)
                                      : ScalarField(grid, 0.0);
    const double d_injected = injecting ? d_functional(eps) : 0.0;
    const double alpha_max = max_value(control.alpha());

    // One reporting step of cfg.dt, substepped below the closed-loop CFL
    // bound; the feedback (and injected estimate) refresh every substep.
    auto advance = [&](double t0) {
        double remaining = cfg.dt;
        while (remaining > 0.0) {
            ScalarField p_hat = p;
            if (cfg.error_injection.active_at(t0)) {
                for (std::size_t i = 0; i < p_hat.size(); ++i)
                    p_hat[i] = p[i] * (1.0 + eps[i]);
            }
            const DensityEstimate est{std::move(p_hat), KdeConfig{}, 0};
            if (!(min_value(est.field) > 0.0))
                throw std::runtime_error("run: perturbed density lost positivity");
            const VectorField v = velocity_from_estimate(est, control);

            const double bound = stable_dt(v, control.sigma(), alpha_max, cfg.scheme.cfl_safety);
            double h = std::min(remaining, bound);
            if (cfg.scheme.time_step_mode == FpScheme::TimeStepMode::fixed) {
                if (cfg.dt > bound)
                    throw std::invalid_argument("run: dt violates the closed-loop CFL bound");
                h = remaining;
            }
            FpScheme sub = cfg.scheme;
            sub.time_step_mode = FpScheme::TimeStepMode::fixed;
            p = fp_step(p, v, control.sigma(), h, sub);
            remaining -= h;
        }
    };

    const int steps = step_count(cfg);
    Diagnostics diag;
    diag.rows.reserve(steps + 1);

    for (int k = 0; k <= steps; ++k) {
        const double t = k * cfg.dt;
        const bool active = cfg.error_injection.active_at(t);
        ScalarField p_hat = p;
        if (active)
            for (std::size_t i = 0; i < p_hat.size(); ++i) p_hat[i] = p[i] * (1.0 + eps[i]);
        const DensityEstimate est{std::move(p_hat), KdeConfig{}, 0};
        const VectorField v = velocity_from_estimate(est, control);

        if (!all_finite(p) || !all_finite(v)) abort_with_dump(cfg, k, t, p, v, "field");

        diag.rows.push_back(make_row(t, p, target, v, active ? d_injected : 0.0));
        if (snapshot_due(cfg, k)) {
            const std::string tag = "step_" + std::to_string(k);
            write_scalar_csv(p, out_path(cfg, tag + "_density.csv"));
            write_vector_csv(v, out_path(cfg, tag + "_velocity.csv"));
            write_pgm(p, out_path(cfg, tag + "_density.pgm"));
        }
        if (k == steps) {
            RunResult result{std::move(diag), std::move(p), std::move(v)};
            finish_outputs(cfg, result);
            return result;
        }
        advance(t);
    }
    throw std::logic_error("run: unreachable");
}

void emit_heatmap(const ScalarField& f, const std::filesystem::path& path) {
    write_pgm(f, path);
}

}  // namespace swarmfield
