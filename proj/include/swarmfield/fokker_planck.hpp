#pragma once

#include "swarmfield/control.hpp"
#include "swarmfield/grid.hpp"

namespace swarmfield {

/// Explicit conservative scheme settings for the macroscopic solver.
struct FpScheme {
    enum class Advection { upwind, central };
    enum class TimeStepMode { fixed, cfl_auto };

    Advection advection = Advection::upwind;
    TimeStepMode time_step_mode = TimeStepMode::cfl_auto;
    /// Fraction of the positivity-preserving step bound actually taken.
    double cfl_safety = 0.9;
};

/// Largest stable (positivity-preserving) step for the explicit update:
///   cfl_safety / (sum_ax max|v_ax|/dx_ax + sum_ax 2 max(sigma + extra)/dx_ax^2).
/// `extra_diffusion` accounts for diffusion hidden inside a feedback
/// velocity (the closed loop transports with effective diffusivity alpha).
double stable_dt(const VectorField& v, const ScalarField& sigma, double extra_diffusion,
                 double cfl_safety);

/// One conservative finite-volume update of
///   dp/dt = -div(v p) + lap(sigma p)
/// from face fluxes F = v_face p_face - d(sigma p)/dn|_face, with exactly
/// zero flux through boundary faces. Mass is conserved to machine precision;
/// upwind advection plus central diffusion keeps p >= 0 under the CFL bound.
/// In fixed mode a dt above the bound is rejected; in cfl_auto mode dt is
/// split into equal substeps below the bound.
ScalarField fp_step(const ScalarField& p, const VectorField& v, const ScalarField& sigma,
                    double dt, const FpScheme& scheme);

/// One closed-loop step: the feedback velocity is computed from p itself and
/// fed to the conservative update, which macroscopically is a diffusion step
/// on p - p* with coefficient alpha. In cfl_auto mode the velocity is
/// recomputed every substep. Requires p > 0.
ScalarField closed_loop_step(const ScalarField& p, const ControlConfig& cfg, double dt,
                             const FpScheme& scheme);

}  // namespace swarmfield
