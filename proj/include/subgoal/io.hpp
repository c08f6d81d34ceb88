#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "subgoal/bottleneck.hpp"
#include "subgoal/grid.hpp"

namespace subgoal {

/// One matrix row per line, comma-separated integers, no header.
void write_grid_csv(std::ostream& out, const CountGrid& grid);
void write_grid_csv(const std::filesystem::path& path, const CountGrid& grid);
CountGrid read_grid_csv(std::istream& in);
CountGrid read_grid_csv(const std::filesystem::path& path);

/// Binary 8-bit PGM (P5). Values are scaled linearly so the maximum maps to
/// 255; an all-zero matrix renders black. Cells outside `open` render 0.
void render_heatmap(const CountGrid& grid, const MaskGrid& open, const std::filesystem::path& path);
void render_heatmap(const CountGrid& grid, const std::filesystem::path& path);

/// Pixel values render_heatmap would write.
std::vector<std::uint8_t> heatmap_pixels(const CountGrid& grid, const MaskGrid& open);

/// JSON list of [row, col] pairs.
std::string cells_json(const std::vector<GridPos>& cells);

}  // namespace subgoal
