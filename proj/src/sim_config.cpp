#include "swarmfield/sim_config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "swarmfield/io.hpp"

namespace swarmfield {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument("config: " + msg);
}

double gaussian(double r2, double s) { return std::exp(-0.5 * r2 / (s * s)); }

}  // namespace

ScalarField realize_density(const DensitySpec& spec, const Grid& grid) {
    switch (spec.type) {
        case DensitySpec::Type::uniform:
            return ScalarField(grid, 1.0);

        case DensitySpec::Type::gaussian_mixture: {
            require(!spec.components.empty(), "gaussian mixture needs components");
            ScalarField f(grid, 0.0);
            for (const auto& c : spec.components) {
                require(c.stddev > 0.0 && c.weight > 0.0,
                        "mixture weights and widths must be positive");
                const double norm =
                    c.weight / std::pow(2.0 * std::numbers::pi * c.stddev * c.stddev,
                                        0.5 * grid.dim());
                for (int iy = 0; iy < grid.cells(1); ++iy)
                    for (int ix = 0; ix < grid.cells(0); ++ix) {
                        const Vec2 x = grid.center(ix, iy);
                        double r2 = 0.0;
                        for (int ax = 0; ax < grid.dim(); ++ax)
                            r2 += (x[ax] - c.mean[ax]) * (x[ax] - c.mean[ax]);
                        f[grid.index(ix, iy)] += norm * gaussian(r2, c.stddev);
                    }
            }
            for (double& v : f.values()) v = std::max(v, spec.floor);
            const double mass = integrate(f);
            for (double& v : f.values()) v /= mass;
            return f;
        }

        case DensitySpec::Type::cosine: {
            require(std::abs(spec.amplitude) < 1.0, "cosine amplitude must be in (-1, 1)");
            require(spec.wavenumber >= 1, "cosine wavenumber must be >= 1");
            const double k = std::numbers::pi * spec.wavenumber;
            ScalarField f = ScalarField::from_function(grid, [&](Vec2 x) {
                double m = std::cos(k * x[0]);
                if (grid.dim() == 2) m *= std::cos(k * x[1]);
                return 1.0 + spec.amplitude * m;
            });
            return f;
        }

        case DensitySpec::Type::from_file: {
            ScalarField f = read_scalar_csv(spec.path);
            require(f.grid() == grid, "density file grid does not match the run grid");
            for (double& v : f.values()) v = std::max(v, spec.floor);
            const double mass = integrate(f);
            require(mass > 0.0, "density file has no mass");
            for (double& v : f.values()) v /= mass;
            return f;
        }
    }
    throw std::logic_error("config: unknown density spec");
}

ScalarField realize_coefficient(double value, const std::string& file, const Grid& grid) {
    if (file.empty()) return ScalarField(grid, value);
    ScalarField f = read_scalar_csv(file);
    require(f.grid() == grid, "coefficient file grid does not match the run grid");
    return f;
}

ScalarField injected_epsilon(const ErrorInjection& injection, const Grid& grid) {
    require(injection.mode != ErrorInjection::Mode::none,
            "no epsilon field for injection mode 'none'");
    require(std::abs(injection.amplitude) < 1.0,
            "injected epsilon amplitude must be in (-1, 1)");
    if (injection.mode == ErrorInjection::Mode::multiplicative_constant)
        return ScalarField(grid, injection.amplitude);

    const double k = std::numbers::pi * injection.wavenumber;
    return ScalarField::from_function(grid, [&](Vec2 x) {
        double m = std::cos(k * x[0]);
        if (grid.dim() == 2) m *= std::cos(k * x[1]);
        return injection.amplitude * m;
    });
}

DensitySpec SimConfig::default_bimodal_target() {
    DensitySpec spec;
    spec.type = DensitySpec::Type::gaussian_mixture;
    spec.components = {{0.5, {0.3, 0.3}, 0.12}, {0.5, {0.7, 0.7}, 0.12}};
    return spec;
}

void SimConfig::validate() const {
    require(dim == 1 || dim == 2, "dim must be 1 or 2");
    require(cells >= 3, "cells per axis must be >= 3");
    require(n_agents >= 1, "n_agents must be >= 1");
    require(dt > 0.0 && t_end > 0.0, "dt and t_end must be > 0");
    if (sigma_file.empty()) require(sigma >= 0.0, "sigma must be >= 0");
    if (alpha_file.empty()) require(alpha > 0.0, "alpha must be > 0");
    require(!velocity_cap || *velocity_cap > 0.0, "velocity_cap must be > 0");
    require(kde.bandwidth > 0.0, "kde bandwidth must be > 0");
    require(snapshot_interval >= 0, "snapshot_interval must be >= 0");
}

namespace {

DensitySpec parse_density(const json& j) {
    DensitySpec spec;
    const std::string type = j.value("type", "uniform");
    if (type == "uniform") {
        spec.type = DensitySpec::Type::uniform;
    } else if (type == "gaussian_mixture") {
        spec.type = DensitySpec::Type::gaussian_mixture;
        for (const auto& c : j.at("components")) {
            DensitySpec::MixtureComponent m;
            m.weight = c.value("weight", 1.0);
            const auto& mean = c.at("mean");
            m.mean = {mean.at(0).get<double>(),
                      mean.size() > 1 ? mean.at(1).get<double>() : 0.0};
            m.stddev = c.at("std").get<double>();
            spec.components.push_back(m);
        }
    } else if (type == "cosine") {
        spec.type = DensitySpec::Type::cosine;
        spec.amplitude = j.at("amplitude").get<double>();
        spec.wavenumber = j.value("wavenumber", 1);
    } else if (type == "from_file") {
        spec.type = DensitySpec::Type::from_file;
        spec.path = j.at("path").get<std::string>();
    } else {
        throw std::invalid_argument("config: unknown density type: " + type);
    }
    spec.floor = j.value("floor", spec.floor);
    return spec;
}

ErrorInjection parse_injection(const json& j) {
    ErrorInjection inj;
    const std::string mode = j.value("mode", "none");
    if (mode == "none") {
        inj.mode = ErrorInjection::Mode::none;
    } else if (mode == "multiplicative_constant") {
        inj.mode = ErrorInjection::Mode::multiplicative_constant;
    } else if (mode == "smooth_field") {
        inj.mode = ErrorInjection::Mode::smooth_field;
    } else {
        throw std::invalid_argument("config: unknown injection mode: " + mode);
    }
    inj.amplitude = j.value("amplitude", 0.0);
    inj.wavenumber = j.value("wavenumber", 1);
    inj.t_stop = j.value("t_stop", inj.t_stop);
    return inj;
}

KdeConfig parse_kde(const json& j, KdeConfig base) {
    base.bandwidth = j.value("bandwidth", base.bandwidth);
    base.truncation_radius = j.value("truncation_radius", base.truncation_radius);
    const std::string corr = j.value("boundary_correction", "renormalize");
    if (corr == "renormalize") {
        base.boundary_correction = KdeConfig::BoundaryCorrection::renormalize;
    } else if (corr == "reflect") {
        base.boundary_correction = KdeConfig::BoundaryCorrection::reflect;
    } else {
        throw std::invalid_argument("config: unknown boundary correction: " + corr);
    }
    return base;
}

FpScheme parse_scheme(const json& j, FpScheme base) {
    const std::string adv = j.value("advection", "upwind");
    if (adv == "upwind") {
        base.advection = FpScheme::Advection::upwind;
    } else if (adv == "central") {
        base.advection = FpScheme::Advection::central;
    } else {
        throw std::invalid_argument("config: unknown advection scheme: " + adv);
    }
    const std::string mode = j.value("time_step_mode", "cfl_auto");
    if (mode == "cfl_auto") {
        base.time_step_mode = FpScheme::TimeStepMode::cfl_auto;
    } else if (mode == "fixed") {
        base.time_step_mode = FpScheme::TimeStepMode::fixed;
    } else {
        throw std::invalid_argument("config: unknown time step mode: " + mode);
    }
    base.cfl_safety = j.value("cfl_safety", base.cfl_safety);
    return base;
}

SimConfig config_from_json(const json& j) {
    SimConfig cfg;
    cfg.n_agents = j.value("n_agents", cfg.n_agents);
    if (j.contains("grid")) {
        cfg.dim = j["grid"].value("dim", cfg.dim);
        cfg.cells = j["grid"].value("cells", cfg.cells);
    }
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_end = j.value("t_end", cfg.t_end);
    auto coefficient = [&](const char* key, double& value, std::string& file) {
        if (!j.contains(key)) return;
        if (j[key].is_object())
            file = j[key].at("file").get<std::string>();
        else
            value = j[key].get<double>();
    };
    coefficient("sigma", cfg.sigma, cfg.sigma_file);
    coefficient("alpha", cfg.alpha, cfg.alpha_file);
    if (j.contains("velocity_cap")) {
        if (j["velocity_cap"].is_null())
            cfg.velocity_cap.reset();
        else
            cfg.velocity_cap = j["velocity_cap"].get<double>();
    }
    if (j.contains("kde")) cfg.kde = parse_kde(j["kde"], cfg.kde);
    if (j.contains("target")) cfg.target = parse_density(j["target"]);
    if (j.contains("initial")) cfg.initial = parse_density(j["initial"]);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("error_injection")) cfg.error_injection = parse_injection(j["error_injection"]);
    if (j.contains("scheme")) cfg.scheme = parse_scheme(j["scheme"], cfg.scheme);
    if (j.contains("output")) {
        cfg.out_dir = j["output"].value("dir", cfg.out_dir);
        cfg.snapshot_interval = j["output"].value("snapshot_interval", cfg.snapshot_interval);
    }
    cfg.validate();
    return cfg;
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    try {
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}


SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::string>& overrides) {
    json j = json::parse(json_text);
    for (const std::string& ov : overrides) {
        const auto eq = ov.find('=');
        require(eq != std::string::npos, "override must look like key.path=value: " + ov);
        const std::string key = ov.substr(0, eq);
        const std::string raw = ov.substr(eq + 1);

        json value;
        try {
            value = json::parse(raw);  // numbers, booleans, null, quoted strings
        } catch (const json::parse_error&) {
            value = raw;  // bare string
        }

        json::json_pointer ptr;
        std::istringstream keys(key);
        std::string part;
        while (std::getline(keys, part, '.')) {
            require(!part.empty(), "empty key segment in override: " + ov);
            ptr /= part;
        }
        j[ptr] = value;
    }
    return j.dump();
}

}  // namespace swarmfield
