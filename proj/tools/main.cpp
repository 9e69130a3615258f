// Command line front end: agent-run / pde-run / sweep over a JSON config.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swarmfield/io.hpp"
#include "swarmfield/metrics.hpp"
#include "swarmfield/run_loop.hpp"
#include "swarmfield/sim_config.hpp"

namespace {

using namespace swarmfield;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CommonOpts {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

SimConfig build_config(const CommonOpts& opts) {
    std::string text = opts.config_path.empty() ? "{}" : read_file(opts.config_path);
    if (!opts.overrides.empty()) text = apply_overrides(text, opts.overrides);
    SimConfig cfg = parse_config(text);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path, "JSON config file (defaults apply without one)");
    cmd->add_option("--override", opts.overrides, "config override, key.path=value (repeatable)");
    cmd->add_option("--seed", opts.seed, "replace the config seed");
    cmd->add_option("--out", opts.out_dir, "output directory for CSVs and heatmaps");
}

void report(const RunResult& result, const SimConfig& cfg) {
    const auto& rows = result.diagnostics.rows;
    std::cout << "steps recorded: " << rows.size() << "\n"
              << "initial l2 error: " << rows.front().l2_error << "\n"
              << "final l2 error:   " << rows.back().l2_error << "\n"
              << "final mass:       " << rows.back().mass << "\n";
    if (!cfg.out_dir.empty()) std::cout << "outputs in: " << cfg.out_dir << "\n";
}

int run_one(const CommonOpts& opts, bool agents) {
    const SimConfig cfg = build_config(opts);
    const RunResult result = agents ? run_agent_loop(cfg) : run_pde_loop(cfg);
    report(result, cfg);
    return 0;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int run_sweep(const CommonOpts& opts, const std::string& mode, const std::string& key,
              const std::string& values_csv, const std::string& seeds_csv) {
    const std::vector<std::string> values = split_list(values_csv);
    if (values.empty()) throw std::runtime_error("sweep: --values is empty");
    std::vector<std::uint64_t> seeds;
    for (const std::string& s : split_list(seeds_csv)) seeds.push_back(std::stoull(s));
    if (seeds.empty()) seeds.push_back(1);

    const std::string base_out = opts.out_dir.value_or("sweep_out");
    std::filesystem::create_directories(base_out);
    std::ofstream summary(std::filesystem::path(base_out) / "summary.csv");
    summary << key << ",seed,initial_l2,final_l2,min_l2,steady_l2\n";

    for (const std::string& value : values) {
        for (std::uint64_t seed : seeds) {
            CommonOpts one = opts;
            one.overrides.push_back(key + "=" + value);
            one.seed = seed;
            one.out_dir = base_out + "/" + key + "=" + value + "/seed=" + std::to_string(seed);
            const SimConfig cfg = build_config(one);
            const RunResult result =
                mode == "agent" ? run_agent_loop(cfg) : run_pde_loop(cfg);

            const auto& rows = result.diagnostics.rows;
            double min_l2 = rows.front().l2_error;
            for (const auto& r : rows) min_l2 = std::min(min_l2, r.l2_error);
            // steady state: mean over the last tenth of the series
            double steady = 0.0;
            const std::size_t tail = std::max<std::size_t>(1, rows.size() / 10);
            for (std::size_t i = rows.size() - tail; i < rows.size(); ++i)
                steady += rows[i].l2_error;
            steady /= static_cast<double>(tail);

            summary << value << ',' << seed << ',' << rows.front().l2_error << ','
                    << rows.back().l2_error << ',' << min_l2 << ',' << steady << '\n';
            std::cout << key << "=" << value << " seed=" << seed
                      << " final_l2=" << rows.back().l2_error << "\n";
        }
    }
    std::cout << "summary: " << base_out << "/summary.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swarm density transport via mean-field feedback velocity fields"};
    app.require_subcommand(1);

    CommonOpts agent_opts, pde_opts, sweep_opts;
    std::string sweep_mode = "pde", sweep_key, sweep_values, sweep_seeds;

    CLI::App* agent = app.add_subcommand("agent-run", "simulate the agent swarm closed loop");
    add_common(agent, agent_opts);

    CLI::App* pde = app.add_subcommand("pde-run", "run the macroscopic solver closed loop");
    add_common(pde, pde_opts);

    CLI::App* sweep = app.add_subcommand("sweep", "run a config over a list of values/seeds");
    add_common(sweep, sweep_opts);
    sweep->add_option("--mode", sweep_mode, "agent or pde")->check(CLI::IsMember({"agent", "pde"}));
    sweep->add_option("--key", sweep_key, "config key to vary, dotted path")->required();
    sweep->add_option("--values", sweep_values, "comma separated values")->required();
    sweep->add_option("--seeds", sweep_seeds, "comma separated seeds (default: 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (agent->parsed()) return run_one(agent_opts, true);
        if (pde->parsed()) return run_one(pde_opts, false);
        return run_sweep(sweep_opts, sweep_mode, sweep_key, sweep_values, sweep_seeds);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
