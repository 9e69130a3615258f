#pragma once

#include <span>

#include "swarmfield/grid.hpp"

namespace swarmfield {

/// Gaussian kernel density estimation settings.
struct KdeConfig {
    enum class BoundaryCorrection { renormalize, reflect };

    double bandwidth = 0.045;
    /// Kernel contributions beyond truncation_radius * bandwidth are dropped.
    double truncation_radius = 4.0;
    BoundaryCorrection boundary_correction = BoundaryCorrection::renormalize;
    /// Added to every cell before the final renormalization so the estimate
    /// is bounded away from zero (the feedback law divides by it).
    double positivity_floor = 1e-12;
};

/// A density estimate: strictly positive everywhere, unit mass within 1e-8.
struct DensityEstimate {
    ScalarField field;
    KdeConfig config;
    int n_samples = 0;
};

/// Raw truncated Gaussian kernel sum at the cell centers,
///   (1 / (N h^n)) sum_i K((x - X_i) / h),
/// with no boundary correction, floor, or renormalization applied.
ScalarField kernel_sum(std::span<const Vec2> positions, const Grid& grid,
                       const KdeConfig& config);

/// Kernel sum, then boundary correction (mass renormalization or kernel
/// reflection across the walls), then positivity floor, then renormalization
/// to unit mass. Rejects N = 0 and positions outside the closed unit box.
DensityEstimate estimate_density(std::span<const Vec2> positions, const Grid& grid,
                                 const KdeConfig& config);

/// Relative estimation error eps = p_hat / p_ref - 1 (> -1 wherever
/// p_hat > 0). Rejects nonpositive p_ref cells.
ScalarField estimation_error(const ScalarField& p_hat, const ScalarField& p_ref);

}  // namespace swarmfield
