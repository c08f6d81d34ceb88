#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "subgoal/free_energy.hpp"
#include "subgoal/gridworld.hpp"
#include "subgoal/learner.hpp"
#include "subgoal/space_model.hpp"

namespace subgoal {

/// Whether schedule_at is indexed by episode or by environment step.
enum class ScheduleUnit { Episode, Step };

struct RunConfig {
    std::string layout = "two_rooms";
    double p_fail = 0.33;
    int episodes = 50;
    int seeds = 10;
    std::uint64_t base_seed = 0;

    FEParams fe;
    Schedules schedules;
    ScheduleUnit lambda_unit = ScheduleUnit::Step;
    ScheduleUnit epsilon_unit = ScheduleUnit::Step;

    double radius = 2.0;
    Metric metric = Metric::Euclidean;
    std::optional<StartRule> start;  // overrides the layout's rule when set

    std::string out_dir = "out";
    bool trace = false;
    int detect_every = 10;

    void validate() const;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat TOML: `key = value` lines, optional [free_energy] / [schedules]
/// section headers, strings, numbers, booleans and `#` comments.
/// Throws ConfigError on unknown keys or bad values.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Canonical TOML rendering; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const RunConfig& config);

}  // namespace subgoal
