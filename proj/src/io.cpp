#include "subgoal/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace subgoal {

void write_grid_csv(std::ostream& out, const CountGrid& grid) {
    for (int r = 0; r < grid.rows(); ++r) {
        for (int c = 0; c < grid.cols(); ++c) {
            if (c) out << ',';
            out << grid(r, c);
        }
        out << '\n';
    }
}

void write_grid_csv(const std::filesystem::path& path, const CountGrid& grid) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_grid_csv(out, grid);
}

CountGrid read_grid_csv(std::istream& in) {
    std::vector<std::vector<std::int64_t>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::int64_t> row;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            std::string_view field = rest.substr(0, comma);
            while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
            while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
            if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty())
                throw std::runtime_error("grid csv: bad value '" + std::string(field) + "' on line " +
                                         std::to_string(line_no));
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("grid csv: ragged row on line " + std::to_string(line_no));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("grid csv: no rows");
    CountGrid grid(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), 0);
    for (int r = 0; r < grid.rows(); ++r)
        for (int c = 0; c < grid.cols(); ++c) grid(r, c) = rows[r][c];
    return grid;
}

CountGrid read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_grid_csv(in);
}

std::vector<std::uint8_t> heatmap_pixels(const CountGrid& grid, const MaskGrid& open) {
    if (grid.empty()) throw std::invalid_argument("heatmap of an empty matrix");
    if (!grid.same_shape(open)) throw std::invalid_argument("heatmap mask shape mismatch");
    std::int64_t peak = 0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (open.values()[i]) peak = std::max(peak, grid.values()[i]);
    std::vector<std::uint8_t> px(grid.size(), 0);
    if (peak <= 0) return px;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!open.values()[i] || grid.values()[i] <= 0) continue;
        const double scaled = 255.0 * static_cast<double>(grid.values()[i]) / static_cast<double>(peak);
        px[i] = static_cast<std::uint8_t>(std::lround(scaled));
    }
    return px;
}

void render_heatmap(const CountGrid& grid, const MaskGrid& open, const std::filesystem::path& path) {
    const auto px = heatmap_pixels(grid, open);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "P5\n" << grid.cols() << ' ' << grid.rows() << "\n255\n";
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

void render_heatmap(const CountGrid& grid, const std::filesystem::path& path) {
    render_heatmap(grid, MaskGrid(grid.rows(), grid.cols(), 1), path);
}

std::string cells_json(const std::vector<GridPos>& cells) {
    nlohmann::json j = nlohmann::json::array();
    for (auto p : cells) j.push_back({p.row, p.col});
    return j.dump();
}

}  // namespace subgoal
