#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "subgoal/gridworld.hpp"
#include "subgoal/learner.hpp"

namespace subgoal {

/// The two state representations: the raw cell, or the cell's local
/// neighbourhood whose Q-values are visit-weighted averages of the members.
enum class SpaceId : std::uint8_t { Main = 0, Agg = 1 };

enum class Metric { Euclidean, Manhattan };

std::string_view to_string(SpaceId id);
std::string_view to_string(Metric m);
Metric parse_metric(std::string_view text);

struct Neighborhood {
    GridPos center;
    std::vector<GridPos> members;  // row-major order, always contains center
    Metric metric = Metric::Euclidean;
    double radius = 2.0;
};

class ZeroSamples : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// All non-wall cells c with d(s, c) < radius (strict).
Neighborhood neighborhood(GridPos s, const Layout& layout, Metric metric, double radius);

/// Visit-weighted mean of the members' Q(., a). Throws ZeroSamples when no
/// member has been updated with `a`.
double q_agg(int a, const QTable& table, const Neighborhood& nb);

/// Concatenation of the members' sample histories for action `a`.
SampleStats pooled_stats(int a, const QTable& table, const Neighborhood& nb);

/// Neighbourhoods precomputed for every open cell of a layout.
class SpaceModel {
  public:
    SpaceModel(const Layout& layout, Metric metric, double radius);

    const Neighborhood& at(GridPos s) const;
    Metric metric() const { return metric_; }
    double radius() const { return radius_; }

  private:
    Metric metric_;
    double radius_;
    int cols_;
    std::vector<Neighborhood> cells_;
};

}  // namespace subgoal
