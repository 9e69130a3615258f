#pragma once

#include <cstdint>
#include <vector>

#include "swarmfield/grid.hpp"

namespace swarmfield {

/// Positions of the agent swarm plus the generator bookkeeping that drives
/// its Wiener increments. Each agent owns a counter-based stream derived
/// from (seed, step_count, agent index), so trajectories are reproducible
/// at any worker count.
struct SwarmState {
    std::vector<Vec2> positions;
    int dim = 2;
    double time = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t step_count = 0;
};

/// n i.i.d. uniform samples over the unit box.
SwarmState sample_initial(int n, int dim, std::uint64_t seed);

/// n i.i.d. samples from a cell-sampled density via rejection against its
/// multilinear interpolant. Aborts after 1e6 * n proposals.
SwarmState sample_initial(int n, const ScalarField& density, std::uint64_t seed);

/// One Euler-Maruyama step of
///   dX = v(X) dt + sqrt(2 sigma(X)) dB
/// with the broadcast fields sampled at each agent by interpolation.
/// Coordinates leaving [0,1] are specularly reflected (x -> -x below 0,
/// x -> 2-x above 1, repeated until inside). Rejects sigma < 0 anywhere and
/// nonfinite velocities.
SwarmState step(const SwarmState& state, const VectorField& v, const ScalarField& sigma,
                double dt);

}  // namespace swarmfield
