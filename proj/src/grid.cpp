#include "swarmfield/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace swarmfield {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_stencil_grid(const Grid& g) {
    for (int ax = 0; ax < g.dim(); ++ax)
        require(g.cells(ax) >= 3, "grid: stencil operators need >= 3 cells per axis");
}

void require_same_grid(const Grid& a, const Grid& b) {
    require(a == b, "grid: fields live on different grids");
}

}  // namespace

Grid::Grid(int dim, int nx, int ny) : dim_(dim), nx_(nx), ny_(ny) {
    require(dim == 1 || dim == 2, "grid: dim must be 1 or 2");
    require(nx >= 1 && ny >= 1, "grid: cells per axis must be positive");
    dx_ = 1.0 / nx_;
    dy_ = 1.0 / ny_;
}

Grid Grid::make_1d(int nx) { return Grid(1, nx, 1); }

Grid Grid::make_2d(int nx, int ny) { return Grid(2, nx, ny); }

ScalarField::ScalarField(const Grid& grid, double fill)
    : grid_(grid), values_(grid.total_cells(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    require(values_.size() == grid_.total_cells(),
            "field: value count does not match grid");
}

VectorField::VectorField(const Grid& grid) {
    components_.reserve(grid.dim());
    for (int ax = 0; ax < grid.dim(); ++ax) components_.emplace_back(grid);
}

VectorField::VectorField(std::vector<ScalarField> components)
    : components_(std::move(components)) {
    require(!components_.empty(), "vector field: no components");
    require(static_cast<int>(components_.size()) == components_.front().grid().dim(),
            "vector field: component count must equal grid dim");
    for (const auto& c : components_) require_same_grid(c.grid(), components_.front().grid());
}

namespace {

// Differences along one axis. `stride` walks the axis in the flat array,
// `line_count` many 1-D lines of `n` cells each start at `line_start(l)`.
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

// d/dx of a scalar line with the requested boundary closure.
void diff_scalar_line(const double* f, double* out, const AxisView& v, double inv2h,
                      BoundaryRule rule) {
    const std::size_t s = v.stride;
    const int n = v.n;
    for (int i = 1; i + 1 < n; ++i)
        out[i * s] = (f[(i + 1) * s] - f[(i - 1) * s]) * inv2h;
    if (rule == BoundaryRule::no_flux) {
        // mirror ghost: f[-1] = f[0], f[n] = f[n-1]
        out[0] = (f[s] - f[0]) * inv2h;
        out[(n - 1) * s] = (f[(n - 1) * s] - f[(n - 2) * s]) * inv2h;
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[s] - f[2 * s]) * inv2h;
        out[(n - 1) * s] =
            (3.0 * f[(n - 1) * s] - 4.0 * f[(n - 2) * s] + f[(n - 3) * s]) * inv2h;
    }
}

// d/dx of a vector component along its own axis, antisymmetric ghosts:
// F[-1] = -F[0], F[n] = -F[n-1] (zero normal component at the walls).
void diff_normal_component_line(const double* f, double* out, const AxisView& v,
                                double inv2h) {
    const std::size_t s = v.stride;
    const int n = v.n;
    for (int i = 1; i + 1 < n; ++i)
        out[i * s] += (f[(i + 1) * s] - f[(i - 1) * s]) * inv2h;
    out[0] += (f[s] + f[0]) * inv2h;
    out[(n - 1) * s] += -(f[(n - 1) * s] + f[(n - 2) * s]) * inv2h;
}

}  // namespace

VectorField gradient(const ScalarField& f, BoundaryRule rule) {
    const Grid& g = f.grid();
    require_stencil_grid(g);
    VectorField out(g);
    for (int ax = 0; ax < g.dim(); ++ax) {
        const AxisView v = axis_view(g, ax);
        const double inv2h = 0.5 / g.cell_width(ax);
        double* dst = out.component(ax).values().data();
        const double* src = f.values().data();
        for (int l = 0; l < v.line_count; ++l) {
            const std::size_t off = l * v.line_stride;
            diff_scalar_line(src + off, dst + off, v, inv2h, rule);
        }
    }
    return out;
}

ScalarField divergence(const VectorField& f) {
    const Grid& g = f.grid();
    require_stencil_grid(g);
    ScalarField out(g, 0.0);
    for (int ax = 0; ax < g.dim(); ++ax) {
        const AxisView v = axis_view(g, ax);
        const double inv2h = 0.5 / g.cell_width(ax);
        double* dst = out.values().data();
        const double* src = f.component(ax).values().data();
        for (int l = 0; l < v.line_count; ++l) {
            const std::size_t off = l * v.line_stride;
            diff_normal_component_line(src + off, dst + off, v, inv2h);
        }
    }
    return out;
}

ScalarField laplacian(const ScalarField& f, BoundaryRule rule) {
    return divergence(gradient(f, rule));
}

double integrate(const ScalarField& f) {
    // Kahan summation: mass bookkeeping downstream checks 1e-13 budgets.
    double sum = 0.0, carry = 0.0;
    for (double v : f.values()) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum * f.grid().cell_volume();
}

namespace {

struct AxisWeights {
    int i0;
    int i1;
    double t;  // weight of i1
};

AxisWeights axis_weights(double x, int n, double h) {
    const double u = x / h - 0.5;
    if (n == 1) return {0, 0, 0.0};
    int i0 = static_cast<int>(std::floor(u));
    if (i0 < 0) i0 = 0;
    if (i0 > n - 2) i0 = n - 2;
    double t = u - i0;
    if (t < 0.0) t = 0.0;
    if (t > 1.0) t = 1.0;
    return {i0, i0 + 1, t};
}

void require_in_box(const Vec2& x, int dim) {
    for (int ax = 0; ax < dim; ++ax)
        if (!(x[ax] >= 0.0 && x[ax] <= 1.0))
            throw std::invalid_argument("interpolate: position outside the closed unit box");
}

}  // namespace

double interpolate(const ScalarField& f, const Vec2& x) {
    const Grid& g = f.grid();
    require_in_box(x, g.dim());
    const AxisWeights wx = axis_weights(x[0], g.cells(0), g.cell_width(0));
    if (g.dim() == 1)
        return (1.0 - wx.t) * f[wx.i0] + wx.t * f[wx.i1];
    const AxisWeights wy = axis_weights(x[1], g.cells(1), g.cell_width(1));
    const double lo = (1.0 - wx.t) * f.at(wx.i0, wy.i0) + wx.t * f.at(wx.i1, wy.i0);
    const double hi = (1.0 - wx.t) * f.at(wx.i0, wy.i1) + wx.t * f.at(wx.i1, wy.i1);
    return (1.0 - wy.t) * lo + wy.t * hi;
}

Vec2 interpolate(const VectorField& f, const Vec2& x) {
    Vec2 out{0.0, 0.0};
    for (int ax = 0; ax < f.dim(); ++ax) out[ax] = interpolate(f.component(ax), x);
    return out;
}

namespace {

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    require_same_grid(a.grid(), b.grid());
    ScalarField out(a.grid());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x + y; });
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x - y; });
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return zip(a, b, [](double x, double y) { return x * y; });
}

ScalarField operator*(double s, const ScalarField& a) {
    ScalarField out = a;
    for (double& v : out.values()) v *= s;
    return out;
}

double min_value(const ScalarField& f) {
    double m = f[0];
    for (double v : f.values()) m = std::min(m, v);
    return m;
}

double max_value(const ScalarField& f) {
    double m = f[0];
    for (double v : f.values()) m = std::max(m, v);
    return m;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values())
        if (!std::isfinite(v)) return false;
    return true;
}

bool all_finite(const VectorField& f) {
    for (int ax = 0; ax < f.dim(); ++ax)
        if (!all_finite(f.component(ax))) return false;
    return true;
}

double max_speed(const VectorField& f) {
    double m = 0.0;
    const std::size_t n = f.component(0).size();
    for (std::size_t i = 0; i < n; ++i) {
        double s2 = 0.0;
        for (int ax = 0; ax < f.dim(); ++ax) s2 += f.component(ax)[i] * f.component(ax)[i];
        m = std::max(m, s2);
    }
    return std::sqrt(m);
}

}  // namespace swarmfield
