#pragma once

#include <vector>

#include "subgoal/grid.hpp"
#include "subgoal/gridworld.hpp"
#include "subgoal/space_model.hpp"

namespace subgoal {

/// Per-cell count of space switches on entry (the model-change matrix).
class ModelChangeMatrix {
  public:
    ModelChangeMatrix() = default;
    explicit ModelChangeMatrix(const Layout& layout);

    /// Increments the entered cell when the selected space differs from the
    /// previous state's. Wall cells are never counted.
    void record_step(SpaceId prev_space, SpaceId cur_space, GridPos cur_state);

    const CountGrid& counts() const { return counts_; }
    const MaskGrid& open() const { return open_; }

  private:
    CountGrid counts_;
    MaskGrid open_;
};

struct OtsuResult {
    /// Cells with value >= threshold form the upper class.
    double threshold = 0.0;
    MaskGrid mask;
    /// True when the considered cells hold fewer than two distinct values.
    bool degenerate = false;
};

/// Otsu's threshold over the exact histogram of integer values: picks the
/// split maximising the between-class variance (ties go to the lower
/// threshold). Only cells with `include` set take part; excluded cells are
/// never in the mask. A degenerate input yields an empty mask.
OtsuResult otsu_threshold(const CountGrid& values, const MaskGrid& include);
OtsuResult otsu_threshold(const CountGrid& values);

struct BottleneckMask {
    MaskGrid mask;
    std::vector<GridPos> cells;  // row-major
};

/// Local maxima of scores*mask over 3x3 windows. A cell survives when its
/// value is positive, strictly greater than every lexicographically smaller
/// neighbour and no smaller than every larger one, so a plateau keeps only
/// its first cell.
BottleneckMask nms(const CountGrid& scores, const MaskGrid& mask);

/// Otsu threshold followed by non-maximum suppression.
BottleneckMask detect(const CountGrid& scores, const MaskGrid& include);
BottleneckMask detect(const CountGrid& scores);

/// The same pipeline applied to state-visit counts.
inline BottleneckMask frequency_baseline(const CountGrid& visits, const MaskGrid& include) {
    return detect(visits, include);
}
inline BottleneckMask frequency_baseline(const CountGrid& visits) { return detect(visits); }

}  // namespace subgoal
