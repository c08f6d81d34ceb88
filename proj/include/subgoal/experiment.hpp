#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "subgoal/bottleneck.hpp"
#include "subgoal/config.hpp"
#include "subgoal/free_energy.hpp"
#include "subgoal/gridworld.hpp"
#include "subgoal/learner.hpp"
#include "subgoal/space_model.hpp"

namespace subgoal {

struct EpisodeResult {
    double total_return = 0.0;  // undiscounted
    int steps = 0;
    bool reached_goal = false;
};

struct Checkpoint {
    int episode = 0;  // 1-based count of completed episodes
    BottleneckMask model_change;
    BottleneckMask baseline;
};

/// One seed's learner, environment and accumulated statistics. Episodes run
/// strictly in sequence; separate runners share nothing.
class SeedRunner {
  public:
    SeedRunner(const RunConfig& config, const Layout& layout, std::uint64_t seed);

    /// SARSA episode with space selection on every entered state. Each
    /// state's selection uses the Q-table after that step's update and is
    /// compared with the previous state's cached selection.
    EpisodeResult run_episode(std::ostream* trace = nullptr);

    /// Detection on the current model-change and visit matrices.
    Checkpoint checkpoint() const;

    const Layout& layout() const { return env_.layout(); }
    const QTable& table() const { return table_; }
    QTable& table() { return table_; }
    const ModelChangeMatrix& model_changes() const { return mc_; }
    const CountGrid& visits() const { return visits_; }
    const SpaceModel& spaces() const { return spaces_; }
    int episodes_done() const { return episode_; }
    std::int64_t total_steps() const { return global_step_; }

  private:
    double epsilon_now() const;
    double lambda_now() const;
    int choose(GridPos s, double epsilon);

    RunConfig config_;
    GridWorld env_;
    SpaceModel spaces_;
    QTable table_;
    ModelChangeMatrix mc_;
    CountGrid visits_;
    Rng rng_;
    int episode_ = 0;
    std::int64_t global_step_ = 0;
};

struct SeedResult {
    std::uint64_t seed = 0;
    std::vector<double> returns;
    CountGrid model_changes;
    CountGrid visits;
    std::vector<Checkpoint> checkpoints;  // last one is the final detection
};

struct RunSummary {
    RunConfig config;
    Layout layout;
    std::vector<SeedResult> seeds;
    Grid<double> detection_rate;  // fraction of seeds whose final mask holds the cell
    Grid<double> baseline_detection_rate;
};

/// Effective layout for a config (built-in or file, with the start override).
Layout layout_for(const RunConfig& config);

/// Seed k runs with the stream mix_seed(config.base_seed, k).
std::uint64_t seed_for(const RunConfig& config, int k);

SeedResult run_seed(const RunConfig& config, const Layout& layout, int k, std::ostream* trace = nullptr);

/// Runs every seed and aggregates. When `write_outputs` is set, artifacts go
/// to config.out_dir.
RunSummary run_experiment(const RunConfig& config, bool write_outputs = true);

/// Writes mc_seed<k>.csv/.pgm, visits_seed<k>.csv, bottlenecks_seed<k>_ep<e>.json
/// and summary.json.
void write_artifacts(const RunSummary& summary, const std::filesystem::path& dir);

std::string summary_json(const RunSummary& summary);

}  // namespace subgoal
