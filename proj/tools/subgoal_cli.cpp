// Command-line front end: run experiments, re-run detection offline, render
// matrices to PGM.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "subgoal/bottleneck.hpp"
#include "subgoal/config.hpp"
#include "subgoal/experiment.hpp"
#include "subgoal/gridworld.hpp"
#include "subgoal/io.hpp"

namespace {

int run_command(const std::string& config_path, int seeds, const std::string& out, bool trace, int episodes,
                const std::string& layout) {
    subgoal::RunConfig config = config_path.empty() ? subgoal::RunConfig{} : subgoal::load_config(config_path);
    if (seeds > 0) config.seeds = seeds;
    if (episodes > 0) config.episodes = episodes;
    if (!out.empty()) config.out_dir = out;
    if (!layout.empty()) config.layout = layout;
    if (trace) config.trace = true;
    config.validate();

    const auto summary = subgoal::run_experiment(config);
    int hits = 0;
    for (const auto& s : summary.seeds) hits += s.checkpoints.back().model_change.cells.empty() ? 0 : 1;
    std::cout << "layout " << summary.layout.name << ": " << summary.seeds.size() << " seeds x " << config.episodes
              << " episodes, " << hits << " seeds with detected bottlenecks; artifacts in " << config.out_dir << '\n';
    for (std::size_t k = 0; k < summary.seeds.size(); ++k)
        std::cout << "  seed " << k << ": " << subgoal::cells_json(summary.seeds[k].checkpoints.back().model_change.cells)
                  << '\n';
    return 0;
}

int detect_command(const std::string& mc_path, const std::string& layout_name, const std::string& out) {
    const auto mc = subgoal::read_grid_csv(std::filesystem::path(mc_path));
    subgoal::BottleneckMask mask;
    if (!layout_name.empty()) {
        const auto layout = subgoal::load_layout(layout_name);
        if (layout.rows() != mc.rows() || layout.cols() != mc.cols())
            throw std::runtime_error("matrix shape does not match layout " + layout_name);
        mask = subgoal::detect(mc, layout.open_mask());
    } else {
        mask = subgoal::detect(mc);
    }
    const auto json = subgoal::cells_json(mask.cells);
    if (out.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << json << '\n';
    }
    return 0;
}

int render_command(const std::string& matrix_path, const std::string& out) {
    subgoal::render_heatmap(subgoal::read_grid_csv(std::filesystem::path(matrix_path)), std::filesystem::path(out));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bottleneck discovery in stochastic gridworlds via free-energy model changes"};
    app.require_subcommand(1);

    std::string config_path, out_dir, layout;
    int seeds = 0, episodes = 0;
    bool trace = false;
    auto* run = app.add_subcommand("run", "run an experiment and write artifacts");
    run->add_option("--config", config_path, "TOML config file");
    run->add_option("--seeds", seeds, "number of seeds (overrides config)")->check(CLI::PositiveNumber);
    run->add_option("--episodes", episodes, "episodes per seed (overrides config)")->check(CLI::PositiveNumber);
    run->add_option("--layout", layout, "built-in layout name or layout file (overrides config)");
    run->add_option("--out", out_dir, "output directory (overrides config)");
    run->add_flag("--trace", trace, "write per-step free-energy traces");

    std::string mc_path, detect_layout, detect_out;
    auto* det = app.add_subcommand("detect", "re-run thresholding and suppression on a saved matrix");
    det->add_option("--mc", mc_path, "model-change (or visit) CSV")->required();
    det->add_option("--layout", detect_layout, "layout whose walls are excluded from thresholding");
    det->add_option("--out", detect_out, "write the JSON cell list here instead of stdout");

    std::string matrix_path, render_out;
    auto* ren = app.add_subcommand("render", "render a matrix CSV as an 8-bit PGM");
    ren->add_option("--matrix", matrix_path, "matrix CSV")->required();
    ren->add_option("--out", render_out, "output PGM path")->required();

    auto* layouts = app.add_subcommand("layouts", "list built-in layouts, or print one");
    std::string show;
    layouts->add_option("name", show, "layout to print");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return run_command(config_path, seeds, out_dir, trace, episodes, layout);
        if (*det) return detect_command(mc_path, detect_layout, detect_out);
        if (*ren) return render_command(matrix_path, render_out);
        if (*layouts) {
            if (show.empty()) {
                for (const auto& n : subgoal::builtin_layout_names()) std::cout << n << '\n';
            } else {
                std::cout << subgoal::format_layout(subgoal::load_layout(show));
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
