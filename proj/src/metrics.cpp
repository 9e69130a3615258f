#include "swarmfield/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmfield {

double l2_error(const ScalarField& p, const ScalarField& p_star) {
    const ScalarField diff = p - p_star;
    return std::sqrt(integrate(diff * diff));
}

double d_functional(const ScalarField& epsilon) {
    for (double e : epsilon.values())
        if (!(e > -1.0)) throw std::invalid_argument("metrics: epsilon must be > -1");

    const Grid& g = epsilon.grid();
    const VectorField grad = gradient(epsilon, BoundaryRule::one_sided);

    double linf = 0.0;
    ScalarField u2(g);
    for (std::size_t i = 0; i < epsilon.size(); ++i) {
        const double denom = 1.0 + epsilon[i];
        double g2 = 0.0;
        for (int ax = 0; ax < g.dim(); ++ax) {
            const double c = grad.component(ax)[i] / denom;
            g2 += c * c;
        }
        linf = std::max(linf, g2);
        u2[i] = epsilon[i] / denom;
    }
    const double l2 = std::sqrt(integrate(u2 * u2));
    return std::max(std::sqrt(linf), l2);
}

double fit_decay_rate(std::span<const std::pair<double, double>> series) {
    if (series.size() < 10)
        throw std::invalid_argument("metrics: rate fit needs at least 10 samples");
    double tbar = 0.0, ybar = 0.0;
    for (const auto& [t, v] : series) {
        if (!(v > 0.0)) throw std::invalid_argument("metrics: rate fit needs positive values");
        tbar += t;
        ybar += std::log(v);
    }
    const double n = static_cast<double>(series.size());
    tbar /= n;
    ybar /= n;
    double stt = 0.0, sty = 0.0;
    for (const auto& [t, v] : series) {
        const double dt = t - tbar;
        stt += dt * dt;
        sty += dt * (std::log(v) - ybar);
    }
    if (!(stt > 0.0)) throw std::invalid_argument("metrics: rate fit needs distinct times");
    return -sty / stt;
}

std::span<const std::pair<double, double>> trim_to_decay_window(
    std::span<const std::pair<double, double>> series) {
    constexpr std::size_t kMinSamples = 10;
    constexpr std::size_t kWindow = 5;
    for (const auto& [t, v] : series)
        if (!(v > 0.0))
            throw std::invalid_argument("metrics: decay window needs positive values");
    if (series.size() <= kMinSamples) return series;

    std::vector<double> slope(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const double dv = std::log(series[i + 1].second) - std::log(series[i].second);
        const double dt = series[i + 1].first - series[i].first;
        slope[i] = dt > 0.0 ? dv / dt : 0.0;
    }
    auto smoothed = [&](std::size_t i) {
        const std::size_t hi = std::min(i + kWindow, slope.size());
        double s = 0.0;
        for (std::size_t k = i; k < hi; ++k) s += slope[k];
        return s / static_cast<double>(hi - i);
    };
    const double initial = std::abs(smoothed(0));
    if (initial == 0.0) return series;
    for (std::size_t i = kMinSamples; i < slope.size(); ++i) {
        if (std::abs(smoothed(i)) < 0.05 * initial)
            return series.subspan(0, std::max(i + 1, kMinSamples));
    }
    return series;
}

double liss_condition_margin(const ScalarField& epsilon, const ScalarField& alpha,
                             const ScalarField& sigma, const IssBoundConfig& bound_cfg) {
    if (!(bound_cfg.theta > 0.0 && bound_cfg.theta < 1.0))
        throw std::invalid_argument("metrics: theta must be in (0, 1)");
    if (!(bound_cfg.poincare_C > 0.0))
        throw std::invalid_argument("metrics: Poincare constant must be > 0");
    if (!(alpha.grid() == epsilon.grid()) || !(sigma.grid() == epsilon.grid()))
        throw std::invalid_argument("metrics: fields live on different grids");

    const double alpha_min = min_value(alpha);
    const double gap = max_abs(alpha - sigma);
    if (gap == 0.0) return std::numeric_limits<double>::infinity();
    const double rhs = alpha_min * bound_cfg.theta / (bound_cfg.poincare_C * gap);

    // LHS: the gradient part of d.
    const Grid& g = epsilon.grid();
    const VectorField grad = gradient(epsilon, BoundaryRule::one_sided);
    double linf2 = 0.0;
    for (std::size_t i = 0; i < epsilon.size(); ++i) {
        if (!(epsilon[i] > -1.0))
            throw std::invalid_argument("metrics: epsilon must be > -1");
        const double denom = 1.0 + epsilon[i];
        double g2 = 0.0;
        for (int ax = 0; ax < g.dim(); ++ax) {
            const double c = grad.component(ax)[i] / denom;
            g2 += c * c;
        }
        linf2 = std::max(linf2, g2);
    }
    return rhs - std::sqrt(linf2);
}

}  // namespace swarmfield
