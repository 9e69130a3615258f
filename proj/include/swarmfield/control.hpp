#pragma once

#include <optional>

#include "swarmfield/grid.hpp"
#include "swarmfield/kde.hpp"

namespace swarmfield {

/// Coefficients of the density feedback law. alpha is the diffusion gain of
/// the closed loop, sigma the agents' noise intensity, target the desired
/// density p* (positive, unit mass). Both coefficients are held as fields;
/// spatially constant runs build them with uniform values.
class ControlConfig {
public:
    ControlConfig(ScalarField alpha, ScalarField sigma, ScalarField target,
                  std::optional<double> velocity_cap = 5.0);

    /// Constant-coefficient convenience.
    ControlConfig(const Grid& grid, double alpha, double sigma, ScalarField target,
                  std::optional<double> velocity_cap = 5.0);

    const ScalarField& alpha() const { return alpha_; }
    const ScalarField& sigma() const { return sigma_; }
    const ScalarField& target() const { return target_; }
    std::optional<double> velocity_cap() const { return velocity_cap_; }
    const Grid& grid() const { return target_.grid(); }

private:
    ScalarField alpha_;
    ScalarField sigma_;
    ScalarField target_;
    std::optional<double> velocity_cap_;
};

/// Feedback velocity from the exact density,
///   v = -[alpha grad(p - p*) - grad(sigma p)] / p,
/// using the no-flux gradient. Rejects any nonpositive p cell (the law
/// divides by p). Components are clamped to +-velocity_cap when set.
VectorField velocity_from_true_density(const ScalarField& p, const ControlConfig& cfg);

/// Same law evaluated on a density estimate; always well defined because the
/// estimate is strictly positive by construction.
VectorField velocity_from_estimate(const DensityEstimate& p_hat, const ControlConfig& cfg);

}  // namespace swarmfield
