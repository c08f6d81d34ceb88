#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subgoal/gridworld.hpp"

namespace subgoal {
namespace {

// Start is the top-left cell, goal the bottom-right one. Dimensions are our
// own choice; only the room topology and the transfer coordinates are fixed.
constexpr std::string_view kTwoRooms =
    "max_steps=100\n"
    "....#.....\n"
    "....#.....\n"
    "....#.....\n"
    "....#.....\n"
    "....#.....\n"
    "..........\n"
    "....#.....\n"
    "....#.....\n"
    "....#.....\n"
    "....#....G\n";

constexpr std::string_view kThreeRooms =
    "max_steps=100\n"
    "...#...#...\n"
    "...#...#...\n"
    "...#...#...\n"
    "...#.......\n"
    "...#...#...\n"
    "...#...#...\n"
    ".......#...\n"
    "...#...#...\n"
    "...#...#...\n"
    "...#...#..G\n";

constexpr std::string_view kFourRooms =
    "max_steps=500\n"
    ".....#.....\n"
    ".....#.....\n"
    "...........\n"
    ".....#.....\n"
    ".....#.....\n"
    "##.#####.##\n"
    ".....#.....\n"
    ".....#.....\n"
    "...........\n"
    ".....#.....\n"
    ".....#....G\n";

constexpr std::string_view kTransferActionRooms =
    "max_steps=100\n"
    "transfer_mode=action\n"
    "..........\n"
    "......#...\n"
    "......#...\n"
    "......#...\n"
    "....T.#...\n"
    "......#...\n"
    "......#...\n"
    "......#...\n"
    "......#.t.\n"
    "......#..G\n";

constexpr std::string_view kTeleportRooms =
    "max_steps=100\n"
    "transfer_mode=teleport\n"
    "..........\n"
    "......#...\n"
    "......#...\n"
    "......#...\n"
    "....T.#...\n"
    "......#...\n"
    "......#...\n"
    "......#...\n"
    "......#.t.\n"
    "......#..G\n";

constexpr std::string_view kHallwayRoom =
    "max_steps=150\n"
    "..........\n"
    "..........\n"
    "..........\n"
    "..........\n"
    "..........\n"
    ".#########\n"
    ".#########\n"
    ".#########\n"
    ".#########\n"
    ".........G\n";

constexpr std::string_view kNineRooms =
    "max_steps=500\n"
    ".....#.....#.....\n"
    ".....#.....#.....\n"
    ".................\n"
    ".....#.....#.....\n"
    ".....#.....#.....\n"
    "##.#####.#####.##\n"
    ".....#.....#.....\n"
    ".....#.....#.....\n"
    ".................\n"
    ".....#.....#.....\n"
    ".....#.....#.....\n"
    "##.#####.#####.##\n"
    ".....#.....#.....\n"
    ".....#.....#.....\n"
    ".................\n"
    ".....#.....#.....\n"
    ".....#.....#....G\n";

constexpr std::array<std::pair<std::string_view, std::string_view>, 7> kBuiltins{{
    {"two_rooms", kTwoRooms},
    {"three_rooms", kThreeRooms},
    {"four_rooms", kFourRooms},
    {"transfer_action_rooms", kTransferActionRooms},
    {"teleport_rooms", kTeleportRooms},
    {"hallway_room", kHallwayRoom},
    {"nine_rooms", kNineRooms},
}};

}  // namespace

std::vector<std::string> builtin_layout_names() {
    std::vector<std::string> names;
    for (const auto& [name, text] : kBuiltins) names.emplace_back(name);
    return names;
}

std::optional<std::string_view> builtin_layout_text(std::string_view name) {
    for (const auto& [n, text] : kBuiltins)
        if (n == name) return text;
    return std::nullopt;
}

}  // namespace subgoal
