#pragma once

#include <span>
#include <utility>
#include <vector>

#include "swarmfield/grid.hpp"

namespace swarmfield {

/// One recorded step of the run diagnostics.
struct DiagnosticsRow {
    double t = 0.0;
    double l2_error = 0.0;
    double lyapunov = 0.0;  // 0.5 * l2_error^2
    double d = 0.0;         // estimation-error input functional; 0 when no error model
    double mass = 0.0;
    double min_density = 0.0;
    double max_speed = 0.0;
};

struct Diagnostics {
    std::vector<DiagnosticsRow> rows;
};

/// Constants of the local ISS bound; theta splits the dissipation budget and
/// C is the domain's Poincare constant. Neither is computed by the analysis,
/// so both are caller-supplied diagnostics inputs (1/pi is the analysis-grade
/// default for the unit square with the zero-mean constraint).
struct IssBoundConfig {
    double theta = 0.5;
    double poincare_C = 0.3183098861837907;  // 1/pi
};

/// sqrt(integral of (p - p*)^2), midpoint quadrature.
double l2_error(const ScalarField& p, const ScalarField& p_star);

/// Input functional of the relative estimation error:
///   d = max{ ||grad(eps)/(1+eps)||_Linf, ||eps/(1+eps)||_L2 }.
/// The Linf norm takes the Euclidean norm of the gradient per cell and the
/// max over cells. Rejects any cell with eps <= -1.
double d_functional(const ScalarField& epsilon);

/// Least-squares slope of log(value) against t, negated. Needs >= 10
/// samples, all values positive; the caller trims the series to the decaying
/// window first.
double fit_decay_rate(std::span<const std::pair<double, double>> series);

/// Prefix of the series before it first flattens: cut where the local
/// log-slope (5-sample moving average) drops below 5% of the initial slope.
/// Never returns fewer than 10 samples if the input has them.
std::span<const std::pair<double, double>> trim_to_decay_window(
    std::span<const std::pair<double, double>> series);

/// Margin of the LISS smallness condition,
///   alpha_min theta / (C ||alpha - sigma||_Linf)  -  ||grad(eps)/(1+eps)||_Linf.
/// Positive means the condition holds for the supplied (theta, C). When
/// alpha == sigma everywhere the constraint is vacuous and the margin is
/// +infinity (the global ISS regime).
double liss_condition_margin(const ScalarField& epsilon, const ScalarField& alpha,
                             const ScalarField& sigma, const IssBoundConfig& bound_cfg);

}  // namespace swarmfield
