#include "subgoal/bottleneck.hpp"

#include <map>
#include <stdexcept>

namespace subgoal {
namespace {

__extension__ using Int128 = __int128;

// Between-class variance up to the constant 1/N^2:
//   (N1*S0 - N0*S1)^2 / (N0*N1)
struct Split {
    Int128 num = 0;
    Int128 den = 1;

    bool better_than(const Split& o) const { return num * o.den > o.num * den; }
};

Split split_score(std::int64_t n0, std::int64_t s0, std::int64_t n1, std::int64_t s1) {
    const Int128 diff = static_cast<Int128>(n1) * s0 - static_cast<Int128>(n0) * s1;
    return {diff * diff, static_cast<Int128>(n0) * n1};
}

}  // namespace

ModelChangeMatrix::ModelChangeMatrix(const Layout& layout)
    : counts_(layout.rows(), layout.cols(), 0), open_(layout.open_mask()) {}

void ModelChangeMatrix::record_step(SpaceId prev_space, SpaceId cur_space, GridPos cur_state) {
    if (!open_.contains(cur_state)) throw std::out_of_range("model-change cell out of range");
    if (prev_space != cur_space && open_[cur_state]) counts_[cur_state] += 1;
}

OtsuResult otsu_threshold(const CountGrid& values, const MaskGrid& include) {
    if (!values.same_shape(include)) throw std::invalid_argument("otsu: include mask shape mismatch");
    OtsuResult out;
    out.mask = MaskGrid(values.rows(), values.cols(), 0);

    std::map<std::int64_t, std::int64_t> histogram;
    std::int64_t total_n = 0;
    std::int64_t total_s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!include.values()[i]) continue;
        const auto v = values.values()[i];
        if (v < 0) throw std::invalid_argument("otsu: negative value");
        histogram[v] += 1;
        total_n += 1;
        total_s += v;
    }
    if (histogram.size() < 2) {
        out.degenerate = true;
        out.threshold = histogram.empty() ? 0.0 : static_cast<double>(histogram.begin()->first);
        return out;
    }

    std::int64_t n0 = 0;
    std::int64_t s0 = 0;
    Split best{-1, 1};
    std::int64_t best_threshold = 0;
    for (auto it = histogram.begin(); std::next(it) != histogram.end(); ++it) {
        n0 += it->second;
        s0 += it->first * it->second;
        const Split score = split_score(n0, s0, total_n - n0, total_s - s0);
        if (score.better_than(best)) {
            best = score;
            best_threshold = std::next(it)->first;
        }
    }

    out.threshold = static_cast<double>(best_threshold);
    for (std::size_t i = 0; i < values.size(); ++i)
        out.mask.values()[i] = include.values()[i] && values.values()[i] >= best_threshold ? 1 : 0;
    return out;
}

OtsuResult otsu_threshold(const CountGrid& values) {
    return otsu_threshold(values, MaskGrid(values.rows(), values.cols(), 1));
}

BottleneckMask nms(const CountGrid& scores, const MaskGrid& mask) {
    if (!scores.same_shape(mask)) throw std::invalid_argument("nms: mask shape mismatch");
    CountGrid product(scores.rows(), scores.cols(), 0);
    for (std::size_t i = 0; i < scores.size(); ++i) product.values()[i] = mask.values()[i] ? scores.values()[i] : 0;

    BottleneckMask out{MaskGrid(scores.rows(), scores.cols(), 0), {}};
    for (int r = 0; r < product.rows(); ++r)
        for (int c = 0; c < product.cols(); ++c) {
            const GridPos here{r, c};
            const auto v = product[here];
            if (v <= 0) continue;
            bool keep = true;
            for (int dr = -1; dr <= 1 && keep; ++dr)
                for (int dc = -1; dc <= 1 && keep; ++dc) {
                    const GridPos there{r + dr, c + dc};
                    if (there == here || !product.contains(there)) continue;
                    const auto w = product[there];
                    if (w > v || (w == v && there < here)) keep = false;
                }
            if (keep) {
                out.mask[here] = 1;
                out.cells.push_back(here);
            }
        }
    return out;
}

BottleneckMask detect(const CountGrid& scores, const MaskGrid& include) {
    return nms(scores, otsu_threshold(scores, include).mask);
}

BottleneckMask detect(const CountGrid& scores) { return nms(scores, otsu_threshold(scores).mask); }

}  // namespace subgoal
