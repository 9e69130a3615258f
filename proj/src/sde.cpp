#include "swarmfield/sde.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "swarmfield/rng.hpp"

namespace swarmfield {

namespace {

// Fixed stream tags so sampling and stepping never collide.
constexpr std::uint64_t kInitStream = 0x5eedu;
constexpr std::uint64_t kStepStream = 0x57e9u;

double reflect_into_unit(double x) {
    while (x < 0.0 || x > 1.0) {
        if (x < 0.0) x = -x;
        if (x > 1.0) x = 2.0 - x;
    }
    return x;
}

}  // namespace

SwarmState sample_initial(int n, int dim, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sde: need at least one agent");
    if (dim != 1 && dim != 2) throw std::invalid_argument("sde: dim must be 1 or 2");
    SplitMix64 rng(mix_stream(seed, kInitStream));
    SwarmState out;
    out.dim = dim;
    out.seed = seed;
    out.positions.reserve(n);
    for (int i = 0; i < n; ++i) {
        Vec2 p{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax) p[ax] = rng.uniform();
        out.positions.push_back(p);
    }
    return out;
}

SwarmState sample_initial(int n, const ScalarField& density, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sde: need at least one agent");
    const double envelope = max_value(density);
    if (!(envelope > 0.0) || !all_finite(density))
        throw std::invalid_argument("sde: initial density must be finite with positive mass");

    const int dim = density.grid().dim();
    SplitMix64 rng(mix_stream(seed, kInitStream));
    SwarmState out;
    out.dim = dim;
    out.seed = seed;
    out.positions.reserve(n);

    const std::uint64_t max_proposals = 1000000ULL * static_cast<std::uint64_t>(n);
    std::uint64_t proposals = 0;
    while (out.positions.size() < static_cast<std::size_t>(n)) {
        if (++proposals > max_proposals)
            throw std::runtime_error("sde: rejection sampling exceeded the proposal budget");
        Vec2 p{0.0, 0.0};
        for (int ax = 0; ax < dim; ++ax) p[ax] = rng.uniform();
        const double u = rng.uniform() * envelope;
        if (u <= interpolate(density, p)) out.positions.push_back(p);
    }
    return out;
}

SwarmState step(const SwarmState& state, const VectorField& v, const ScalarField& sigma,
                double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("sde: dt must be > 0");
    if (v.grid().dim() != state.dim || sigma.grid() != v.grid())
        throw std::invalid_argument("sde: fields must share one grid matching the swarm dim");
    if (min_value(sigma) < 0.0) throw std::invalid_argument("sde: sigma must be nonnegative");
    if (!all_finite(v)) throw std::invalid_argument("sde: velocity field has nonfinite values");

    SwarmState out = state;
    out.time = state.time + dt;
    out.step_count = state.step_count + 1;

    const std::size_t n = state.positions.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& x = state.positions[i];
        const Vec2 vel = interpolate(v, x);
        const double noise = std::sqrt(2.0 * interpolate(sigma, x) * dt);

        SplitMix64 rng(mix_stream(state.seed ^ kStepStream, state.step_count, i));
        std::normal_distribution<double> normal;
        Vec2 next = x;
        for (int ax = 0; ax < state.dim; ++ax) {
            const double proposed = x[ax] + vel[ax] * dt + noise * normal(rng);
            next[ax] = reflect_into_unit(proposed);
        }
        out.positions[i] = next;
    }
    return out;
}

}  // namespace swarmfield
