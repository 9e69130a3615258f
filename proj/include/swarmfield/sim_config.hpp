#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "swarmfield/fokker_planck.hpp"
#include "swarmfield/grid.hpp"
#include "swarmfield/kde.hpp"

namespace swarmfield {

/// How to build a density on the grid: the target profile and, reused, the
/// initial profile (PDE initial condition, or the sampling density for the
/// agents' initial positions).
struct DensitySpec {
    enum class Type { uniform, gaussian_mixture, cosine, from_file };

    struct MixtureComponent {
        double weight = 1.0;
        Vec2 mean{0.5, 0.5};
        double stddev = 0.1;
    };

    Type type = Type::uniform;
    std::vector<MixtureComponent> components;  // gaussian_mixture
    double amplitude = 0.0;                    // cosine: 1 + a prod_ax cos(pi k x_ax)
    int wavenumber = 1;
    std::string path;                          // from_file
    /// Profiles are clipped from below at this value and renormalized,
    /// mirroring the smoothing preprocessing that keeps the target bounded
    /// away from zero.
    double floor = 1e-3;
};

/// Positive density with unit mass realized at the cell centers.
ScalarField realize_density(const DensitySpec& spec, const Grid& grid);

/// Constant coefficient field, or the contents of a scalar-field CSV when
/// `file` is nonempty (grid must match).
ScalarField realize_coefficient(double value, const std::string& file, const Grid& grid);

/// Manufactured relative estimation error applied to the true density in
/// oracle-loop studies: p_hat = p (1 + eps). Active while t < t_stop.
struct ErrorInjection {
    enum class Mode { none, multiplicative_constant, smooth_field };

    Mode mode = Mode::none;
    double amplitude = 0.0;  // the constant c, or the smooth-field amplitude
    int wavenumber = 1;      // smooth_field: eps = a prod_ax cos(pi k x_ax)
    double t_stop = std::numeric_limits<double>::infinity();

    bool active_at(double t) const { return mode != Mode::none && t < t_stop; }
};

/// The injected eps as a field; requires |amplitude| < 1 so eps > -1.
ScalarField injected_epsilon(const ErrorInjection& injection, const Grid& grid);

/// Everything a run needs; defaults reproduce the desk-scale reference
/// experiment (1024 agents, 64x64 grid, dt = 0.02, sigma = 5e-4,
/// alpha = 0.03, h = 0.045, uniform start, bimodal target).
struct SimConfig {
    int n_agents = 1024;
    int dim = 2;
    int cells = 64;  // per axis
    double dt = 0.02;
    double t_end = 20.0;
    double sigma = 0.0005;
    double alpha = 0.03;
    // nonempty: load the coefficient from a scalar-field CSV instead
    std::string sigma_file;
    std::string alpha_file;
    std::optional<double> velocity_cap = 5.0;
    KdeConfig kde;
    DensitySpec target = default_bimodal_target();
    DensitySpec initial;  // uniform
    std::uint64_t seed = 1;
    ErrorInjection error_injection;
    FpScheme scheme;
    std::string out_dir;        // empty: no files written
    int snapshot_interval = 0;  // in steps; 0: no snapshots

    static DensitySpec default_bimodal_target();
    void validate() const;
};

/// Load a JSON config file; missing keys keep their defaults.
SimConfig load_config(const std::filesystem::path& path);

/// Parse a config from JSON text (the file loader's core, also used by
/// overrides and tests).
SimConfig parse_config(const std::string& json_text);

/// Apply "dotted.path=value" overrides on the JSON representation before
/// parsing, e.g. "kde.bandwidth=0.06" or "seed=3".
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides);

}  // namespace swarmfield
