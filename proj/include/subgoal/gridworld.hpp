#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "subgoal/grid.hpp"
#include "subgoal/rng.hpp"

namespace subgoal {

enum class Cell : std::uint8_t { Floor, Wall, Goal, TransferSource, TransferTarget };
enum class StartRule { FixedTopLeft, RandomCorner };
enum class TransferMode { None, TransferAction, Teleport };

enum class Action : int { Up = 0, Down = 1, Left = 2, Right = 3, Transfer = 4 };

constexpr int kMoveActions = 4;
constexpr int kMaxActions = 5;

class LayoutError : public std::runtime_error {
  public:
    enum class Kind { Malformed, MissingGoal, MultipleGoals, BadTransfer, NoStart, UnreachableGoal, UnknownName };

    LayoutError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

class InvalidAction : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

struct Layout {
    std::string name;
    Grid<Cell> cells;
    StartRule start_rule = StartRule::FixedTopLeft;
    int max_steps = 100;
    TransferMode transfer_mode = TransferMode::None;

    // Cached by validation.
    GridPos goal;
    std::optional<GridPos> transfer_source;
    std::optional<GridPos> transfer_target;

    int rows() const { return cells.rows(); }
    int cols() const { return cells.cols(); }
    bool in_bounds(GridPos p) const { return cells.contains(p); }
    bool is_wall(GridPos p) const { return !in_bounds(p) || cells[p] == Cell::Wall; }
    bool is_open(GridPos p) const { return !is_wall(p); }

    /// Size of the action set: 5 when the layout has a transfer action.
    int num_actions() const { return transfer_mode == TransferMode::TransferAction ? kMaxActions : kMoveActions; }

    /// Actions the agent may take in `s`. Transfer only exists at the source cell.
    std::vector<Action> actions_at(GridPos s) const;

    /// Non-wall orthogonal neighbours of `s`, in Up/Down/Left/Right order.
    std::vector<GridPos> open_neighbors(GridPos s) const;

    /// Candidate start cells under the start rule.
    std::vector<GridPos> start_cells() const;

    /// Wall cells marked 0, everything else 1.
    MaskGrid open_mask() const;
};

struct Transition {
    GridPos next_state;
    double reward = 0.0;
    bool done = false;
    bool collided = false;
};

/// Reward scheme.
constexpr double kStepReward = -1.0;
constexpr double kGoalReward = 10.0;
constexpr double kCollisionReward = -10.0;

/// Names of the built-in layouts.
std::vector<std::string> builtin_layout_names();

/// ASCII source of a built-in layout, if `name` is one.
std::optional<std::string_view> builtin_layout_text(std::string_view name);

/// Parse the ASCII layout format. Throws LayoutError.
Layout parse_layout(std::string_view text, std::string name = "custom");

/// Built-in name or path to a layout file. Throws LayoutError.
Layout load_layout(const std::string& name_or_path);

/// Checks cell-count invariants and goal reachability, fills the cached fields.
void validate_layout(Layout& layout);

/// ASCII form accepted by parse_layout.
std::string format_layout(const Layout& layout);

GridPos reset(const Layout& layout, Rng& rng);

/// One environment transition without episode bookkeeping (`done` only
/// reflects reaching the goal). Throws InvalidAction.
Transition transition(const Layout& layout, GridPos state, Action action, double p_fail, Rng& rng);

/// Stateful episode wrapper: tracks the current cell and the step cap.
class GridWorld {
  public:
    GridWorld(Layout layout, double p_fail, std::uint64_t seed);

    GridPos reset();
    Transition step(Action action);

    const Layout& layout() const { return layout_; }
    GridPos state() const { return state_; }
    int steps() const { return steps_; }
    bool done() const { return done_; }
    double p_fail() const { return p_fail_; }

  private:
    Layout layout_;
    double p_fail_;
    Rng rng_;
    GridPos state_{};
    int steps_ = 0;
    bool done_ = true;
};

std::string_view to_string(Action a);

}  // namespace subgoal
