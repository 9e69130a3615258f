#include "swarmfield/kde.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace swarmfield {

namespace {

void validate(const KdeConfig& cfg) {
    if (!(cfg.bandwidth > 0.0)) throw std::invalid_argument("kde: bandwidth must be > 0");
    if (!(cfg.truncation_radius >= 3.0))
        throw std::invalid_argument("kde: truncation_radius must be >= 3");
    if (!(cfg.positivity_floor >= 0.0))
        throw std::invalid_argument("kde: positivity floor must be >= 0");
}

void validate_positions(std::span<const Vec2> positions, int dim) {
    if (positions.empty()) throw std::invalid_argument("kde: no samples");
    for (const Vec2& p : positions)
        for (int ax = 0; ax < dim; ++ax)
            if (!(p[ax] >= 0.0 && p[ax] <= 1.0))
                throw std::invalid_argument("kde: position outside the closed unit box");
}

// Index range of cell centers within distance r of coordinate x.
struct CellRange {
    int lo;
    int hi;  // inclusive
};

CellRange cells_within(double x, double r, int n, double h) {
    int lo = static_cast<int>(std::ceil((x - r) / h - 0.5));
    int hi = static_cast<int>(std::floor((x + r) / h - 0.5));
    if (lo < 0) lo = 0;
    if (hi > n - 1) hi = n - 1;
    return {lo, hi};
}

// Adds one (possibly reflected) kernel center into the accumulator. The
// Gaussian factorizes per axis, so the per-axis weights are evaluated once
// and combined; the circular cutoff is applied on the squared radius.
void add_kernel_2d(std::vector<double>& acc, const Grid& g, const Vec2& c, double h,
                   double r) {
    const double r2 = r * r;
    const double inv2h2 = 0.5 / (h * h);
    const CellRange rx = cells_within(c[0], r, g.cells(0), g.cell_width(0));
    const CellRange ry = cells_within(c[1], r, g.cells(1), g.cell_width(1));
    if (rx.lo > rx.hi || ry.lo > ry.hi) return;

    thread_local std::vector<double> wx, d2x, wy, d2y;
    wx.clear(); d2x.clear(); wy.clear(); d2y.clear();
    for (int ix = rx.lo; ix <= rx.hi; ++ix) {
        const double d = g.center(ix, 0)[0] - c[0];
        d2x.push_back(d * d);
        wx.push_back(std::exp(-d * d * inv2h2));
    }
    for (int iy = ry.lo; iy <= ry.hi; ++iy) {
        const double d = (iy + 0.5) * g.cell_width(1) - c[1];
        d2y.push_back(d * d);
        wy.push_back(std::exp(-d * d * inv2h2));
    }
    for (int iy = ry.lo; iy <= ry.hi; ++iy) {
        const double dy2 = d2y[iy - ry.lo];
        const double wyv = wy[iy - ry.lo];
        double* row = acc.data() + g.index(rx.lo, iy);
        for (int ix = rx.lo; ix <= rx.hi; ++ix) {
            if (d2x[ix - rx.lo] + dy2 <= r2) row[ix - rx.lo] += wx[ix - rx.lo] * wyv;
        }
    }
}

void add_kernel_1d(std::vector<double>& acc, const Grid& g, double c, double h, double r) {
    const double inv2h2 = 0.5 / (h * h);
    const CellRange rx = cells_within(c, r, g.cells(0), g.cell_width(0));
    for (int ix = rx.lo; ix <= rx.hi; ++ix) {
        const double d = g.center(ix)[0] - c;
        acc[ix] += std::exp(-d * d * inv2h2);
    }
}

// Mirror images of x across the walls it sits within distance r of
// (including the original coordinate itself, always first).
int reflections(double x, double r, double out[3]) {
    int n = 0;
    out[n++] = x;
    if (x <= r) out[n++] = -x;
    if (1.0 - x <= r) out[n++] = 2.0 - x;
    return n;
}

ScalarField raw_sum(std::span<const Vec2> positions, const Grid& g, const KdeConfig& cfg,
                    bool reflect) {
    const double h = cfg.bandwidth;
    const double r = cfg.truncation_radius * h;
    std::vector<double> acc(g.total_cells(), 0.0);

    if (g.dim() == 1) {
        for (const Vec2& p : positions) {
            double xs[3];
            const int nx = reflect ? reflections(p[0], r, xs) : 1;
            if (!reflect) xs[0] = p[0];
            for (int i = 0; i < nx; ++i) add_kernel_1d(acc, g, xs[i], h, r);
        }
    } else {
        for (const Vec2& p : positions) {
            double xs[3], ys[3];
            int nx = 1, ny = 1;
            xs[0] = p[0];
            ys[0] = p[1];
            if (reflect) {
                nx = reflections(p[0], r, xs);
                ny = reflections(p[1], r, ys);
            }
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) add_kernel_2d(acc, g, {xs[i], ys[j]}, h, r);
        }
    }

    const double norm =
        1.0 / (static_cast<double>(positions.size()) * std::pow(h, g.dim()) *
               std::pow(2.0 * std::numbers::pi, 0.5 * g.dim()));
    for (double& v : acc) v *= norm;
    return ScalarField(g, std::move(acc));
}

}  // namespace

ScalarField kernel_sum(std::span<const Vec2> positions, const Grid& grid,
                       const KdeConfig& config) {
    validate(config);
    validate_positions(positions, grid.dim());
    return raw_sum(positions, grid, config, false);
}

DensityEstimate estimate_density(std::span<const Vec2> positions, const Grid& grid,
                                 const KdeConfig& config) {
    validate(config);
    validate_positions(positions, grid.dim());

    const bool reflect =
        config.boundary_correction == KdeConfig::BoundaryCorrection::reflect;
    // one mirror image per wall is only exact while the truncated kernel
    // cannot span both walls at once
    if (reflect && config.truncation_radius * config.bandwidth > 1.0)
        throw std::invalid_argument(
            "kde: reflection correction needs truncation_radius * bandwidth <= 1");
    ScalarField field = raw_sum(positions, grid, config, reflect);

    for (double& v : field.values()) v += config.positivity_floor;
    const double mass = integrate(field);
    if (!(mass > 0.0)) throw std::runtime_error("kde: estimate has no mass");
    const double scale = 1.0 / mass;
    for (double& v : field.values()) v *= scale;

    return DensityEstimate{std::move(field), config, static_cast<int>(positions.size())};
}

ScalarField estimation_error(const ScalarField& p_hat, const ScalarField& p_ref) {
    if (!(p_hat.grid() == p_ref.grid()))
        throw std::invalid_argument("kde: estimate and reference on different grids");
    ScalarField out(p_hat.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(p_ref[i] > 0.0))
            throw std::invalid_argument("kde: reference density must be positive everywhere");
        out[i] = p_hat[i] / p_ref[i] - 1.0;
    }
    return out;
}

}  // namespace swarmfield
