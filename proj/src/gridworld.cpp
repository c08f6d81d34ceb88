#include "subgoal/gridworld.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <queue>
#include <sstream>

namespace subgoal {
namespace {

constexpr std::array<GridPos, 4> kMoves{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

GridPos offset(GridPos p, GridPos d) { return {p.row + d.row, p.col + d.col}; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

Cell cell_from_char(char c, int line) {
    switch (c) {
        case '.': return Cell::Floor;
        case '#': return Cell::Wall;
        case 'G': return Cell::Goal;
        case 'T': return Cell::TransferSource;
        case 't': return Cell::TransferTarget;
        default:
            throw LayoutError(LayoutError::Kind::Malformed,
                              "unexpected character '" + std::string(1, c) + "' on line " + std::to_string(line));
    }
}

char char_from_cell(Cell c) {
    switch (c) {
        case Cell::Floor: return '.';
        case Cell::Wall: return '#';
        case Cell::Goal: return 'G';
        case Cell::TransferSource: return 'T';
        case Cell::TransferTarget: return 't';
    }
    return '?';
}

void apply_header(Layout& layout, std::string_view key, std::string_view value, int line) {
    auto bad = [&](const std::string& msg) {
        return LayoutError(LayoutError::Kind::Malformed, msg + " on line " + std::to_string(line));
    };
    if (key == "max_steps") {
        int v = 0;
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc{} || ptr != value.data() + value.size() || v <= 0) throw bad("invalid max_steps");
        layout.max_steps = v;
    } else if (key == "transfer_mode") {
        if (value == "none") layout.transfer_mode = TransferMode::None;
        else if (value == "action") layout.transfer_mode = TransferMode::TransferAction;
        else if (value == "teleport") layout.transfer_mode = TransferMode::Teleport;
        else throw bad("invalid transfer_mode '" + std::string(value) + "'");
    } else if (key == "start") {
        if (value == "top_left") layout.start_rule = StartRule::FixedTopLeft;
        else if (value == "random_corner") layout.start_rule = StartRule::RandomCorner;
        else throw bad("invalid start '" + std::string(value) + "'");
    } else {
        throw bad("unknown header key '" + std::string(key) + "'");
    }
}

// Cells reachable from `from` by deterministic moves (plus transfer edges).
Grid<std::uint8_t> reachable(const Layout& layout, GridPos from) {
    Grid<std::uint8_t> seen(layout.rows(), layout.cols(), 0);
    std::queue<GridPos> frontier;
    seen[from] = 1;
    frontier.push(from);
    while (!frontier.empty()) {
        GridPos p = frontier.front();
        frontier.pop();
        std::vector<GridPos> next;
        for (auto d : kMoves) {
            GridPos q = offset(p, d);
            if (layout.is_wall(q)) continue;
            if (layout.transfer_mode == TransferMode::Teleport && q == layout.transfer_source)
                q = *layout.transfer_target;
            next.push_back(q);
        }
        if (layout.transfer_mode == TransferMode::TransferAction && p == layout.transfer_source)
            next.push_back(*layout.transfer_target);
        for (auto q : next) {
            if (!seen[q]) {
                seen[q] = 1;
                frontier.push(q);
            }
        }
    }
    return seen;
}

}  // namespace

std::string_view to_string(Action a) {
    switch (a) {
        case Action::Up: return "up";
        case Action::Down: return "down";
        case Action::Left: return "left";
        case Action::Right: return "right";
        case Action::Transfer: return "transfer";
    }
    return "?";
}

std::vector<Action> Layout::actions_at(GridPos s) const {
    std::vector<Action> out{Action::Up, Action::Down, Action::Left, Action::Right};
    if (transfer_mode == TransferMode::TransferAction && transfer_source && s == *transfer_source)
        out.push_back(Action::Transfer);
    return out;
}

std::vector<GridPos> Layout::open_neighbors(GridPos s) const {
    std::vector<GridPos> out;
    for (auto d : kMoves) {
        GridPos q = offset(s, d);
        if (is_open(q)) out.push_back(q);
    }
    return out;
}

std::vector<GridPos> Layout::start_cells() const {
    std::vector<GridPos> out;
    if (start_rule == StartRule::FixedTopLeft) {
        for (int r = 0; r < rows() && out.empty(); ++r)
            for (int c = 0; c < cols(); ++c)
                if (cells(r, c) == Cell::Floor) {
                    out.push_back({r, c});
                    break;
                }
        return out;
    }
    const std::array<GridPos, 4> corners{{{0, 0}, {0, cols() - 1}, {rows() - 1, 0}, {rows() - 1, cols() - 1}}};
    for (auto c : corners)
        if (cells[c] == Cell::Floor && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    return out;
}

MaskGrid Layout::open_mask() const {
    MaskGrid mask(rows(), cols(), 0);
    for (int r = 0; r < rows(); ++r)
        for (int c = 0; c < cols(); ++c) mask(r, c) = cells(r, c) == Cell::Wall ? 0 : 1;
    return mask;
}

Layout parse_layout(std::string_view text, std::string name) {
    Layout layout;
    layout.name = std::move(name);
    std::vector<std::string> rows;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == ';') continue;
        if (auto eq = line.find('='); eq != std::string_view::npos) {
            if (!rows.empty())
                throw LayoutError(LayoutError::Kind::Malformed,
                                  "header after grid rows on line " + std::to_string(line_no));
            apply_header(layout, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
            continue;
        }
        for (char c : line) cell_from_char(c, line_no);
        if (!rows.empty() && line.size() != rows.front().size())
            throw LayoutError(LayoutError::Kind::Malformed, "ragged grid row on line " + std::to_string(line_no));
        rows.emplace_back(line);
    }
    if (rows.empty()) throw LayoutError(LayoutError::Kind::Malformed, "layout has no grid rows");

    layout.cells = Grid<Cell>(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), Cell::Floor);
    for (int r = 0; r < layout.rows(); ++r)
        for (int c = 0; c < layout.cols(); ++c) layout.cells(r, c) = cell_from_char(rows[r][c], r + 1);
    validate_layout(layout);
    return layout;
}

void validate_layout(Layout& layout) {
    std::vector<GridPos> goals, sources, targets;
    for (int r = 0; r < layout.rows(); ++r)
        for (int c = 0; c < layout.cols(); ++c) {
            switch (layout.cells(r, c)) {
                case Cell::Goal: goals.push_back({r, c}); break;
                case Cell::TransferSource: sources.push_back({r, c}); break;
                case Cell::TransferTarget: targets.push_back({r, c}); break;
                default: break;
            }
        }
    if (goals.empty()) throw LayoutError(LayoutError::Kind::MissingGoal, "layout has no goal cell");
    if (goals.size() > 1) throw LayoutError(LayoutError::Kind::MultipleGoals, "layout has more than one goal cell");
    layout.goal = goals.front();

    if (layout.transfer_mode == TransferMode::None) {
        if (!sources.empty() || !targets.empty())
            throw LayoutError(LayoutError::Kind::BadTransfer, "transfer cells present but transfer_mode=none");
        layout.transfer_source.reset();
        layout.transfer_target.reset();
    } else {
        if (sources.size() != 1 || targets.size() != 1)
            throw LayoutError(LayoutError::Kind::BadTransfer,
                              "transfer layouts need exactly one source 'T' and one target 't'");
        layout.transfer_source = sources.front();
        layout.transfer_target = targets.front();
    }

    auto starts = layout.start_cells();
    if (starts.empty()) throw LayoutError(LayoutError::Kind::NoStart, "layout has no valid start cell");
    for (auto s : starts) {
        if (!reachable(layout, s)[layout.goal])
            throw LayoutError(LayoutError::Kind::UnreachableGoal,
                              "goal unreachable from start (" + std::to_string(s.row) + "," +
                                  std::to_string(s.col) + ")");
    }
}

Layout load_layout(const std::string& name_or_path) {
    if (auto text = builtin_layout_text(name_or_path)) return parse_layout(*text, name_or_path);
    std::ifstream in(name_or_path);
    if (!in)
        throw LayoutError(LayoutError::Kind::UnknownName,
                          "'" + name_or_path + "' is neither a built-in layout nor a readable file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_layout(buf.str(), name_or_path);
}

std::string format_layout(const Layout& layout) {
    std::ostringstream out;
    out << "max_steps=" << layout.max_steps << '\n';
    if (layout.transfer_mode == TransferMode::TransferAction) out << "transfer_mode=action\n";
    if (layout.transfer_mode == TransferMode::Teleport) out << "transfer_mode=teleport\n";
    if (layout.start_rule == StartRule::RandomCorner) out << "start=random_corner\n";
    for (int r = 0; r < layout.rows(); ++r) {
        for (int c = 0; c < layout.cols(); ++c) out << char_from_cell(layout.cells(r, c));
        out << '\n';
    }
    return out.str();
}

GridPos reset(const Layout& layout, Rng& rng) {
    auto starts = layout.start_cells();
    if (starts.empty()) throw LayoutError(LayoutError::Kind::NoStart, "layout has no valid start cell");
    if (layout.start_rule == StartRule::FixedTopLeft) return starts.front();
    return starts[rng.index(starts.size())];
}

Transition transition(const Layout& layout, GridPos state, Action action, double p_fail, Rng& rng) {
    const int id = static_cast<int>(action);
    if (id < 0 || id >= layout.num_actions())
        throw InvalidAction("action id " + std::to_string(id) + " not available in layout");
    if (action == Action::Transfer && !(layout.transfer_source && state == *layout.transfer_source))
        throw InvalidAction("transfer action only fires at the transfer source");

    Transition t;
    t.next_state = state;
    t.reward = kStepReward;
    if (rng.bernoulli(p_fail)) {
        auto neighbors = layout.open_neighbors(state);
        if (!neighbors.empty()) t.next_state = neighbors[rng.index(neighbors.size())];
    } else if (action == Action::Transfer) {
        t.next_state = *layout.transfer_target;
    } else {
        GridPos q = offset(state, kMoves[static_cast<std::size_t>(id)]);
        if (layout.is_wall(q)) {
            t.reward = kCollisionReward;
            t.collided = true;
        } else {
            t.next_state = q;
        }
    }
    if (layout.transfer_mode == TransferMode::Teleport && t.next_state == layout.transfer_source)
        t.next_state = *layout.transfer_target;
    if (t.next_state == layout.goal) {
        t.reward = kGoalReward;
        t.done = true;
    }
    return t;
}

GridWorld::GridWorld(Layout layout, double p_fail, std::uint64_t seed)
    : layout_(std::move(layout)), p_fail_(p_fail), rng_(seed) {
    if (!(p_fail >= 0.0 && p_fail <= 1.0)) throw std::invalid_argument("p_fail must lie in [0, 1]");
}

GridPos GridWorld::reset() {
    state_ = subgoal::reset(layout_, rng_);
    steps_ = 0;
    done_ = false;
    return state_;
}

Transition GridWorld::step(Action action) {
    if (done_) throw std::logic_error("step() called on a finished episode; call reset()");
    Transition t = transition(layout_, state_, action, p_fail_, rng_);
    state_ = t.next_state;
    ++steps_;
    if (steps_ >= layout_.max_steps) t.done = true;
    done_ = t.done;
    return t;
}

}  // namespace subgoal
