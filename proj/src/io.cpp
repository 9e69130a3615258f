#include "swarmfield/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace swarmfield {

namespace {

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = {}) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("io: cannot open for writing: " + path.string());
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_scalar_csv(const ScalarField& f, const std::filesystem::path& path) {
    auto out = open_out(path);
    const Grid& g = f.grid();
    out << g.cells(0) << ',' << g.cells(1) << ',' << fmt(g.cell_width(0)) << '\n';
    for (int iy = 0; iy < g.cells(1); ++iy) {
        for (int ix = 0; ix < g.cells(0); ++ix) {
            if (ix) out << ',';
            out << fmt(f.at(ix, iy));
        }
        out << '\n';
    }
}

ScalarField read_scalar_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("io: cannot open for reading: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("io: empty field file");
    int nx = 0, ny = 0;
    double width = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &nx, &ny, &width) != 3)
        throw std::runtime_error("io: bad field header: " + line);
    const Grid g = ny == 1 ? Grid::make_1d(nx) : Grid::make_2d(nx, ny);

    std::vector<double> values;
    values.reserve(g.total_cells());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    }
    if (values.size() != g.total_cells())
        throw std::runtime_error("io: field value count does not match header");
    return ScalarField(g, std::move(values));
}

void write_vector_csv(const VectorField& f, const std::filesystem::path& path) {
    auto out = open_out(path);
    const Grid& g = f.grid();
    out << "x,y,v1,v2\n";
    for (int iy = 0; iy < g.cells(1); ++iy) {
        for (int ix = 0; ix < g.cells(0); ++ix) {
            const Vec2 c = g.center(ix, iy);
            const std::size_t i = g.index(ix, iy);
            const double v2 = g.dim() == 2 ? f.component(1)[i] : 0.0;
            out << fmt(c[0]) << ',' << fmt(c[1]) << ',' << fmt(f.component(0)[i]) << ','
                << fmt(v2) << '\n';
        }
    }
}

void write_positions_csv(const SwarmState& state, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "agent_id,x,y\n";
    for (std::size_t i = 0; i < state.positions.size(); ++i)
        out << i << ',' << fmt(state.positions[i][0]) << ',' << fmt(state.positions[i][1])
            << '\n';
}

void write_diagnostics_csv(const Diagnostics& diag, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "t,l2_error,lyapunov,d,mass,min_density,max_speed\n";
    for (const DiagnosticsRow& r : diag.rows)
        out << fmt(r.t) << ',' << fmt(r.l2_error) << ',' << fmt(r.lyapunov) << ','
            << fmt(r.d) << ',' << fmt(r.mass) << ',' << fmt(r.min_density) << ','
            << fmt(r.max_speed) << '\n';
}

void write_pgm(const ScalarField& f, const std::filesystem::path& path) {
    if (!all_finite(f)) throw std::invalid_argument("io: heatmap needs a finite field");
    auto out = open_out(path, std::ios::binary);
    const Grid& g = f.grid();
    out << "P5\n" << g.cells(0) << ' ' << g.cells(1) << "\n255\n";

    const double lo = min_value(f);
    const double hi = max_value(f);
    const double span = hi - lo;
    std::vector<unsigned char> row(g.cells(0));
    for (int iy = g.cells(1) - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < g.cells(0); ++ix) {
            row[ix] = span > 0.0
                          ? static_cast<unsigned char>(
                                std::lround((f.at(ix, iy) - lo) / span * 255.0))
                          : static_cast<unsigned char>(127);
        }
        out.write(reinterpret_cast<const char*>(row.data()), row.size());
    }
}

}  // namespace swarmfield
