#pragma once

#include <filesystem>
#include <string>

#include "swarmfield/grid.hpp"
#include "swarmfield/metrics.hpp"
#include "swarmfield/sde.hpp"

namespace swarmfield {

/// Scalar field snapshot: header line "nx,ny,cell_width", then ny lines of
/// nx comma-separated values, row-major (x fastest). Round-trip exact.
void write_scalar_csv(const ScalarField& f, const std::filesystem::path& path);
ScalarField read_scalar_csv(const std::filesystem::path& path);

/// Vector field snapshot: one row per cell with columns x,y,v1,v2
/// (v2 = 0 for 1-D fields).
void write_vector_csv(const VectorField& f, const std::filesystem::path& path);

/// Agent positions: header agent_id,x,y.
void write_positions_csv(const SwarmState& state, const std::filesystem::path& path);

/// Diagnostics time series: header t,l2_error,lyapunov,d,mass,min_density,max_speed.
void write_diagnostics_csv(const Diagnostics& diag, const std::filesystem::path& path);

/// Binary PGM (P5) with linear min-max scaling to 0..255; a constant field
/// maps to mid-gray 127. Rows are written top down (largest y first).
void write_pgm(const ScalarField& f, const std::filesystem::path& path);

}  // namespace swarmfield
