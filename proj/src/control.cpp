#include "swarmfield/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swarmfield {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ControlConfig::ControlConfig(ScalarField alpha, ScalarField sigma, ScalarField target,
                             std::optional<double> velocity_cap)
    : alpha_(std::move(alpha)), sigma_(std::move(sigma)), target_(std::move(target)),
      velocity_cap_(velocity_cap) {
    require(alpha_.grid() == target_.grid() && sigma_.grid() == target_.grid(),
            "control: alpha, sigma, target must share one grid");
    require(min_value(alpha_) > 0.0, "control: inf alpha must be > 0");
    require(all_finite(alpha_) && all_finite(sigma_), "control: coefficients must be finite");
    require(min_value(sigma_) >= 0.0, "control: sigma must be nonnegative");
    require(min_value(target_) > 0.0, "control: target density must be positive");
    require(std::abs(integrate(target_) - 1.0) <= 1e-8,
            "control: target density must integrate to 1");
    if (velocity_cap_) require(*velocity_cap_ > 0.0, "control: velocity cap must be > 0");
}

ControlConfig::ControlConfig(const Grid& grid, double alpha, double sigma,
                             ScalarField target, std::optional<double> velocity_cap)
    : ControlConfig(ScalarField(grid, alpha), ScalarField(grid, sigma), std::move(target),
                    velocity_cap) {}

namespace {

// v = -[alpha grad(p - p*) - grad(sigma p)] / p. grad(sigma p) is one
// stencil on the product field, not a product rule expansion.
VectorField feedback_velocity(const ScalarField& p, const ControlConfig& cfg) {
    const Grid& g = p.grid();
    const VectorField grad_diff = gradient(p - cfg.target(), BoundaryRule::no_flux);
    const VectorField grad_sp = gradient(cfg.sigma() * p, BoundaryRule::no_flux);

    VectorField v(g);
    const std::size_t n = p.size();
    for (int ax = 0; ax < g.dim(); ++ax) {
        const ScalarField& gd = grad_diff.component(ax);
        const ScalarField& gs = grad_sp.component(ax);
        ScalarField& out = v.component(ax);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = -(cfg.alpha()[i] * gd[i] - gs[i]) / p[i];
        if (cfg.velocity_cap()) {
            const double cap = *cfg.velocity_cap();
            for (std::size_t i = 0; i < n; ++i)
                out[i] = std::clamp(out[i], -cap, cap);
        }
    }
    return v;
}

}  // namespace

VectorField velocity_from_true_density(const ScalarField& p, const ControlConfig& cfg) {
    require(p.grid() == cfg.grid(), "control: density on a different grid than the config");
    if (!(min_value(p) > 0.0))
        throw std::invalid_argument("control: density must be positive everywhere");
    return feedback_velocity(p, cfg);
}

VectorField velocity_from_estimate(const DensityEstimate& p_hat, const ControlConfig& cfg) {
    require(p_hat.field.grid() == cfg.grid(),
            "control: estimate on a different grid than the config");
    return feedback_velocity(p_hat.field, cfg);
}

}  // namespace swarmfield
