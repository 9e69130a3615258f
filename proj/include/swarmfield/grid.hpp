#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace swarmfield {

/// A point (or vector) in the plane; for 1-D problems only component 0 is used.
using Vec2 = std::array<double, 2>;

/// Uniform cell-centered grid over the open unit box (0,1)^dim, dim in {1,2}.
///
/// Cells are indexed ix in [0,nx), iy in [0,ny) with centers at
/// ((ix+0.5)*dx, (iy+0.5)*dy) and dx = 1/nx, dy = 1/ny. Storage order of
/// fields on the grid is row-major with x fastest: flat = iy*nx + ix.
class Grid {
public:
    static Grid make_1d(int nx);
    static Grid make_2d(int nx, int ny);

    int dim() const { return dim_; }
    int cells(int axis) const { return axis == 0 ? nx_ : ny_; }
    double cell_width(int axis) const { return axis == 0 ? dx_ : dy_; }
    std::size_t total_cells() const { return static_cast<std::size_t>(nx_) * ny_; }
    double cell_volume() const { return dim_ == 1 ? dx_ : dx_ * dy_; }

    std::size_t index(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * nx_ + ix;
    }
    Vec2 center(int ix, int iy = 0) const {
        return {(ix + 0.5) * dx_, dim_ == 2 ? (iy + 0.5) * dy_ : 0.0};
    }

    bool operator==(const Grid&) const = default;

private:
    Grid(int dim, int nx, int ny);

    int dim_;
    int nx_;
    int ny_;
    double dx_;
    double dy_;
};

/// Cell-centered samples of a scalar function on a Grid.
class ScalarField {
public:
    explicit ScalarField(const Grid& grid, double fill = 0.0);
    ScalarField(const Grid& grid, std::vector<double> values);

    /// Sample f(center) at every cell. F maps Vec2 -> double.
    template <class F>
    static ScalarField from_function(const Grid& grid, F&& f) {
        ScalarField out(grid);
        for (int iy = 0; iy < grid.cells(1); ++iy)
            for (int ix = 0; ix < grid.cells(0); ++ix)
                out[grid.index(ix, iy)] = f(grid.center(ix, iy));
        return out;
    }

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& at(int ix, int iy = 0) { return values_[grid_.index(ix, iy)]; }
    double at(int ix, int iy = 0) const { return values_[grid_.index(ix, iy)]; }

    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// dim scalar components sharing one grid (velocity fields and gradients).
class VectorField {
public:
    explicit VectorField(const Grid& grid);
    explicit VectorField(std::vector<ScalarField> components);

    const Grid& grid() const { return components_.front().grid(); }
    int dim() const { return static_cast<int>(components_.size()); }
    ScalarField& component(int axis) { return components_[axis]; }
    const ScalarField& component(int axis) const { return components_[axis]; }

private:
    std::vector<ScalarField> components_;
};

/// Boundary treatment for the difference stencils. `one_sided` closes the
/// stencil with second-order one-sided differences; `no_flux` mirrors the
/// boundary cell into a ghost cell (zero normal derivative), which is the
/// discrete form of the reflecting boundary condition.
enum class BoundaryRule { one_sided, no_flux };

/// Central-difference gradient; boundary cells per `rule`. Requires >= 3
/// cells per axis. Exact for affine fields at interior cells.
VectorField gradient(const ScalarField& f, BoundaryRule rule = BoundaryRule::one_sided);

/// Central-difference divergence with antisymmetric mirror ghosts for each
/// component along its own axis (zero normal component at the walls). This
/// pairing makes the discrete integration-by-parts identity against
/// gradient(f, no_flux) hold to machine precision:
///   sum f * div(F) * vol + sum grad(f) . F * vol == 0.
ScalarField divergence(const VectorField& f);

/// divergence(gradient(f, rule)): the composition, so that identities built
/// from the two first-order operators are exact by construction.
ScalarField laplacian(const ScalarField& f, BoundaryRule rule = BoundaryRule::no_flux);

/// Midpoint quadrature: sum of values times cell volume (compensated sum).
double integrate(const ScalarField& f);

/// Multilinear interpolation among the surrounding cell centers. Queries
/// outside the outermost cell-center box clamp to the nearest face value.
/// x must lie in the closed unit box.
double interpolate(const ScalarField& f, const Vec2& x);
Vec2 interpolate(const VectorField& f, const Vec2& x);

// Pointwise field arithmetic; grids must match.
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double s, const ScalarField& a);

double min_value(const ScalarField& f);
double max_value(const ScalarField& f);
double max_abs(const ScalarField& f);
bool all_finite(const ScalarField& f);
bool all_finite(const VectorField& f);

/// Largest Euclidean norm of the vector over all cells.
double max_speed(const VectorField& f);

}  // namespace swarmfield
