#include "subgoal/experiment.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "subgoal/io.hpp"

namespace subgoal {

SeedRunner::SeedRunner(const RunConfig& config, const Layout& layout, std::uint64_t seed)
    : config_(config),
      env_(layout, config.p_fail, mix_seed(seed, 0)),
      spaces_(layout, config.metric, config.radius),
      table_(layout.rows(), layout.cols(), layout.num_actions()),
      mc_(layout),
      visits_(layout.rows(), layout.cols(), 0),
      rng_(mix_seed(seed, 1)) {}

double SeedRunner::epsilon_now() const {
    const auto k = config_.epsilon_unit == ScheduleUnit::Episode ? episode_ : global_step_;
    return epsilon_at(config_.schedules, k);
}

double SeedRunner::lambda_now() const {
    const auto k = config_.lambda_unit == ScheduleUnit::Episode ? episode_ : global_step_;
    return lambda_at(config_.schedules, k);
}

int SeedRunner::choose(GridPos s, double epsilon) {
    const auto q = table_.q_values(s, static_cast<int>(env_.layout().actions_at(s).size()));
    return select_action(epsilon_greedy(q, epsilon), rng_);
}

EpisodeResult SeedRunner::run_episode(std::ostream* trace) {
    const Layout& layout = env_.layout();
    EpisodeResult result;

    GridPos s = env_.reset();
    visits_[s] += 1;
    double epsilon = epsilon_now();
    int a = choose(s, epsilon);
    SpaceId prev = select_space(s, layout, table_, spaces_, config_.fe, epsilon).selected;

    while (true) {
        const Transition tr = env_.step(static_cast<Action>(a));
        ++global_step_;
        ++result.steps;
        result.total_return += tr.reward;
        visits_[tr.next_state] += 1;

        const double lambda = lambda_now();
        epsilon = epsilon_now();
        const int a_next = choose(tr.next_state, epsilon);
        sarsa_update(table_, s, a, tr.reward, tr.next_state, a_next, lambda, config_.schedules.gamma);

        const auto report = select_space(tr.next_state, layout, table_, spaces_, config_.fe, epsilon);
        mc_.record_step(prev, report.selected, tr.next_state);
        if (trace) {
            *trace << episode_ << ',' << result.steps << ',' << tr.next_state.row << ',' << tr.next_state.col << ','
                   << report[SpaceId::Main].free_energy << ',' << report[SpaceId::Agg].free_energy << ','
                   << to_string(report.selected) << '\n';
        }
        prev = report.selected;

        if (tr.done) {
            result.reached_goal = tr.next_state == layout.goal;
            break;
        }
        s = tr.next_state;
        a = a_next;
    }
    ++episode_;
    return result;
}

Checkpoint SeedRunner::checkpoint() const {
    const auto open = env_.layout().open_mask();
    return {episode_, detect(mc_.counts(), open), frequency_baseline(visits_, open)};
}

Layout layout_for(const RunConfig& config) {
    Layout layout = load_layout(config.layout);
    if (config.start && *config.start != layout.start_rule) {
        layout.start_rule = *config.start;
        validate_layout(layout);
    }
    return layout;
}

std::uint64_t seed_for(const RunConfig& config, int k) {
    return mix_seed(config.base_seed, static_cast<std::uint64_t>(k));
}

SeedResult run_seed(const RunConfig& config, const Layout& layout, int k, std::ostream* trace) {
    SeedResult out;
    out.seed = seed_for(config, k);
    SeedRunner runner(config, layout, out.seed);
    for (int e = 0; e < config.episodes; ++e) {
        out.returns.push_back(runner.run_episode(trace).total_return);
        const int done = e + 1;
        if (done % config.detect_every == 0 || done == config.episodes) out.checkpoints.push_back(runner.checkpoint());
    }
    out.model_changes = runner.model_changes().counts();
    out.visits = runner.visits();
    return out;
}

RunSummary run_experiment(const RunConfig& config, bool write_outputs) {
    config.validate();
    RunSummary summary;
    summary.config = config;
    summary.layout = layout_for(config);
    const Layout& layout = summary.layout;

    std::filesystem::path dir(config.out_dir);
    if (write_outputs) std::filesystem::create_directories(dir);

    for (int k = 0; k < config.seeds; ++k) {
        std::ofstream trace_file;
        std::ostream* trace = nullptr;
        if (write_outputs && config.trace) {
            trace_file.open(dir / ("trace_seed" + std::to_string(k) + ".csv"), std::ios::binary);
            if (!trace_file) throw std::runtime_error("cannot write trace file in " + dir.string());
            trace_file << "episode,step,row,col,f_main,f_agg,space\n";
            trace_file.precision(17);
            trace = &trace_file;
        }
        summary.seeds.push_back(run_seed(config, layout, k, trace));
    }

    summary.detection_rate = Grid<double>(layout.rows(), layout.cols(), 0.0);
    summary.baseline_detection_rate = Grid<double>(layout.rows(), layout.cols(), 0.0);
    const double share = 1.0 / static_cast<double>(summary.seeds.size());
    for (const auto& seed : summary.seeds) {
        const auto& final = seed.checkpoints.back();
        for (auto p : final.model_change.cells) summary.detection_rate[p] += share;
        for (auto p : final.baseline.cells) summary.baseline_detection_rate[p] += share;
    }

    if (write_outputs) write_artifacts(summary, dir);
    return summary;
}

namespace {

nlohmann::json cells_array(const std::vector<GridPos>& cells) {
    nlohmann::json j = nlohmann::json::array();
    for (auto p : cells) j.push_back({p.row, p.col});
    return j;
}

nlohmann::json grid_array(const Grid<double>& g) {
    nlohmann::json j = nlohmann::json::array();
    for (int r = 0; r < g.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
        j.push_back(std::move(row));
    }
    return j;
}

}  // namespace

std::string summary_json(const RunSummary& summary) {
    nlohmann::ordered_json j;
    const auto& c = summary.config;
    j["layout"] = summary.layout.name;
    j["config"] = {{"p_fail", c.p_fail},          {"episodes", c.episodes},
                   {"seeds", c.seeds},            {"seed", c.base_seed},
                   {"alpha", c.fe.alpha},         {"beta", c.fe.beta},
                   {"nu", c.fe.nu},               {"gamma", c.schedules.gamma},
                   {"lambda0", c.schedules.lambda0}, {"lambda_decay", c.schedules.lambda_decay},
                   {"eps0", c.schedules.eps0},    {"eps_decay", c.schedules.eps_decay},
                   {"lambda_form", c.schedules.lambda_form == DecayForm::Inverse ? "inverse" : "geometric"},
                   {"lambda_unit", c.lambda_unit == ScheduleUnit::Step ? "step" : "episode"},
                   {"epsilon_unit", c.epsilon_unit == ScheduleUnit::Step ? "step" : "episode"},
                   {"behavior", c.fe.behavior == BehaviorSource::Main ? "main" : "space"},
                   {"radius", c.radius},          {"metric", std::string(to_string(c.metric))},
                   {"detect_every", c.detect_every}};
    nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < summary.seeds.size(); ++k) {
        const auto& s = summary.seeds[k];
        nlohmann::ordered_json entry;
        entry["index"] = k;
        entry["seed"] = s.seed;
        entry["returns"] = s.returns;
        nlohmann::ordered_json checkpoints = nlohmann::ordered_json::array();
        for (const auto& cp : s.checkpoints)
            checkpoints.push_back({{"episode", cp.episode},
                                   {"bottlenecks", cells_array(cp.model_change.cells)},
                                   {"baseline", cells_array(cp.baseline.cells)}});
        entry["checkpoints"] = std::move(checkpoints);
        seeds.push_back(std::move(entry));
    }
    j["seeds"] = std::move(seeds);
    j["detection_rate"] = grid_array(summary.detection_rate);
    j["baseline_detection_rate"] = grid_array(summary.baseline_detection_rate);
    return j.dump(2) + "\n";
}

void write_artifacts(const RunSummary& summary, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto open = summary.layout.open_mask();
    for (std::size_t k = 0; k < summary.seeds.size(); ++k) {
        const auto& s = summary.seeds[k];
        const std::string tag = "seed" + std::to_string(k);
        write_grid_csv(dir / ("mc_" + tag + ".csv"), s.model_changes);
        render_heatmap(s.model_changes, open, dir / ("mc_" + tag + ".pgm"));
        write_grid_csv(dir / ("visits_" + tag + ".csv"), s.visits);
        for (const auto& cp : s.checkpoints) {
            std::ofstream out(dir / ("bottlenecks_" + tag + "_ep" + std::to_string(cp.episode) + ".json"),
                              std::ios::binary);
            if (!out) throw std::runtime_error("cannot write bottleneck file in " + dir.string());
            out << cells_json(cp.model_change.cells) << '\n';
        }
    }
    std::ofstream out(dir / "summary.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.json in " + dir.string());
    out << summary_json(summary);
}

}  // namespace subgoal
