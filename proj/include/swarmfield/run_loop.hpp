#pragma once

#include <filesystem>

#include "swarmfield/metrics.hpp"
#include "swarmfield/sim_config.hpp"

namespace swarmfield {

/// Outcome of a run: the diagnostics time series plus the final fields for
/// inspection (the density estimate for agent runs, the solved density for
/// PDE runs).
struct RunResult {
    Diagnostics diagnostics;
    ScalarField density;
    VectorField velocity;
};

/// The microscopic loop: per step, estimate the density from the agent
/// positions, compute the broadcast velocity from the estimate, advance all
/// agents, record diagnostics. Every agent in a step sees the velocity
/// computed from the estimate at the step's start. Deterministic per seed.
/// Aborts (with a field dump when an output directory is set) if any field
/// turns nonfinite.
RunResult run_agent_loop(const SimConfig& cfg);

/// The macroscopic oracle loop: optionally inject a manufactured estimation
/// error (p_hat = p (1 + eps)), apply the feedback law, advance the
/// conservative solver. Without injection this is the exact closed loop;
/// with injection it is the perturbed system driven by a known eps.
RunResult run_pde_loop(const SimConfig& cfg);

/// Renders a field as a binary PGM heatmap (linear min-max scaling).
void emit_heatmap(const ScalarField& f, const std::filesystem::path& path);

}  // namespace swarmfield
