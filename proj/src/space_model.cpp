#include "subgoal/space_model.hpp"

#include <cmath>
#include <string>

namespace subgoal {

std::string_view to_string(SpaceId id) { return id == SpaceId::Main ? "main" : "agg"; }

std::string_view to_string(Metric m) { return m == Metric::Euclidean ? "euclidean" : "manhattan"; }

Metric parse_metric(std::string_view text) {
    if (text == "euclidean") return Metric::Euclidean;
    if (text == "manhattan") return Metric::Manhattan;
    throw std::invalid_argument("unknown metric '" + std::string(text) + "'");
}

Neighborhood neighborhood(GridPos s, const Layout& layout, Metric metric, double radius) {
    if (layout.is_wall(s)) throw std::invalid_argument("neighborhood centre must be an open cell");
    Neighborhood nb{s, {}, metric, radius};
    const int reach = static_cast<int>(std::ceil(radius));
    for (int dr = -reach; dr <= reach; ++dr)
        for (int dc = -reach; dc <= reach; ++dc) {
            const double d = metric == Metric::Euclidean ? std::sqrt(static_cast<double>(dr * dr + dc * dc))
                                                         : static_cast<double>(std::abs(dr) + std::abs(dc));
            if (!(d < radius)) continue;
            GridPos p{s.row + dr, s.col + dc};
            if (layout.is_open(p)) nb.members.push_back(p);
        }
    return nb;
}

double q_agg(int a, const QTable& table, const Neighborhood& nb) {
    // Accumulate offsets from the first visited member so one visited member,
    // or identical members, give back that value exactly.
    const ActionStats* ref = nullptr;
    double offset = 0.0;
    std::int64_t total = 0;
    for (auto p : nb.members) {
        const auto& st = table.at(p, a);
        if (st.n == 0) continue;
        if (!ref) ref = &st;
        offset += static_cast<double>(st.n) * (st.q - ref->q);
        total += st.n;
    }
    if (total == 0) throw ZeroSamples("no samples of this action in the neighbourhood");
    return ref->q + offset / static_cast<double>(total);
}

SampleStats pooled_stats(int a, const QTable& table, const Neighborhood& nb) {
    SampleStats out;
    for (auto p : nb.members) {
        const auto& st = table.at(p, a);
        out.n += st.n;
        out.s1 += st.s1;
        out.s2 += st.s2;
        out.t_samples += st.t_samples;
    }
    return out;
}

SpaceModel::SpaceModel(const Layout& layout, Metric metric, double radius)
    : metric_(metric), radius_(radius), cols_(layout.cols()) {
    if (!(radius > 0.0)) throw std::invalid_argument("neighbourhood radius must be positive");
    cells_.resize(static_cast<std::size_t>(layout.rows()) * layout.cols());
    for (int r = 0; r < layout.rows(); ++r)
        for (int c = 0; c < layout.cols(); ++c)
            if (layout.is_open({r, c})) cells_[static_cast<std::size_t>(r) * cols_ + c] = neighborhood({r, c}, layout, metric, radius);
}

const Neighborhood& SpaceModel::at(GridPos s) const {
    const auto& nb = cells_.at(static_cast<std::size_t>(s.row) * cols_ + s.col);
    if (nb.members.empty()) throw std::invalid_argument("no neighbourhood for a wall cell");
    return nb;
}

}  // namespace subgoal
