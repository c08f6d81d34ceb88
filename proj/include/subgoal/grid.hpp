#pragma once

#include <cstddef>
#include <cstdint>
#include <compare>
#include <stdexcept>
#include <vector>

namespace subgoal {

/// Cell coordinate. Row 0 is the top of the map; "Up" decreases the row.
struct GridPos {
    int row = 0;
    int col = 0;

    friend constexpr bool operator==(const GridPos&, const GridPos&) = default;
    friend constexpr auto operator<=>(const GridPos&, const GridPos&) = default;
};

/// Dense row-major 2-D array.
template <class T>
class Grid {
  public:
    Grid() = default;
    Grid(int rows, int cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative grid shape");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    bool contains(GridPos p) const {
        return p.row >= 0 && p.col >= 0 && p.row < rows_ && p.col < cols_;
    }

    T& operator()(int r, int c) { return data_[index(r, c)]; }
    const T& operator()(int r, int c) const { return data_[index(r, c)]; }
    T& operator[](GridPos p) { return (*this)(p.row, p.col); }
    const T& operator[](GridPos p) const { return (*this)(p.row, p.col); }

    T& at(GridPos p) {
        if (!contains(p)) throw std::out_of_range("grid position out of range");
        return (*this)[p];
    }
    const T& at(GridPos p) const {
        if (!contains(p)) throw std::out_of_range("grid position out of range");
        return (*this)[p];
    }

    const std::vector<T>& values() const { return data_; }
    std::vector<T>& values() { return data_; }

    bool same_shape(const auto& other) const {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

  private:
    std::size_t index(int r, int c) const { return static_cast<std::size_t>(r) * cols_ + c; }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<T> data_;
};

using CountGrid = Grid<std::int64_t>;
using MaskGrid = Grid<std::uint8_t>;

}  // namespace subgoal
