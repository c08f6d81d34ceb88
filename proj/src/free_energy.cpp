#include "subgoal/free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace subgoal {
namespace {

// 8-point Gauss-Legendre on [-1, 1]; exact for polynomials up to degree 15.
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                         -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

double clamped_log(double p, double floor) { return std::log(std::clamp(p, floor, 1.0)); }

std::vector<double> uniform_simplex(std::size_t k) { return std::vector<double>(k, 1.0 / static_cast<double>(k)); }

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("policy vectors differ in length");
}

}  // namespace

void FEParams::validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(beta > 1.0)) throw std::invalid_argument("beta must exceed 1");
    if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in (0, 1)");
    if (!(prob_floor > 0.0 && prob_floor < 1.0)) throw std::invalid_argument("prob_floor must lie in (0, 1)");
}

double confidence_radius(double stddev, std::int64_t n, double nu) {
    if (n < 2) throw InsufficientSamples("confidence radius needs n >= 2");
    const double log_term = std::log(3.0 / nu);
    const double nd = static_cast<double>(n);
    return stddev * std::sqrt(2.0 * log_term / nd) + 3.0 * log_term / nd;
}

double confidence_radius(const SampleStats& stats, double nu) {
    if (stats.n < 2 || stats.t_samples < 2) throw InsufficientSamples("confidence radius needs n >= 2");
    return confidence_radius(stddev_from_sums(stats.t_samples, stats.s1, stats.s2), stats.n, nu);
}

BeliefInterval belief_interval(double center, const SampleStats& stats, double nu) {
    if (stats.n < 2 || stats.t_samples < 2) return {center, 0.0, false};
    return {center, confidence_radius(stats, nu), true};
}

std::vector<double> thompson_policy(std::span<const BeliefInterval> intervals) {
    const std::size_t k = intervals.size();
    if (k == 0) throw std::invalid_argument("thompson_policy over an empty action set");
    if (std::any_of(intervals.begin(), intervals.end(), [](const auto& b) { return !b.sufficient; }))
        return uniform_simplex(k);

    auto lo = [&](std::size_t j) { return intervals[j].center - intervals[j].radius; };
    auto hi = [&](std::size_t j) { return intervals[j].center + intervals[j].radius; };
    auto is_point = [&](std::size_t j) { return !(intervals[j].radius > 0.0); };
    auto cdf = [&](std::size_t j, double x) {
        if (is_point(j)) return x >= intervals[j].center ? 1.0 : 0.0;
        return std::clamp((x - lo(j)) / (hi(j) - lo(j)), 0.0, 1.0);
    };

    std::vector<double> p(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (is_point(i)) {
            const double v = intervals[i].center;
            std::size_t ties = 0;
            bool dominated = false;
            for (std::size_t j = 0; j < k; ++j) {
                if (!is_point(j)) continue;
                if (intervals[j].center > v) dominated = true;
                if (intervals[j].center == v) ++ties;
            }
            if (dominated) continue;
            double prob = 1.0 / static_cast<double>(ties);
            for (std::size_t j = 0; j < k; ++j)
                if (!is_point(j)) prob *= cdf(j, v);
            p[i] = prob;
            continue;
        }

        // Integrate density_i(x) * prod_{j != i} F_j(x) over [lo_i, hi_i].
        std::vector<double> cuts{lo(i), hi(i)};
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            for (double x : {lo(j), hi(j)})
                if (x > lo(i) && x < hi(i)) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        const double density = 1.0 / (hi(i) - lo(i));
        double total = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double half = 0.5 * (cuts[s + 1] - cuts[s]);
            const double mid = 0.5 * (cuts[s + 1] + cuts[s]);
            double seg = 0.0;
            for (std::size_t g = 0; g < kGlNodes.size(); ++g) {
                const double x = mid + half * kGlNodes[g];
                double prod = 1.0;
                for (std::size_t j = 0; j < k && prod > 0.0; ++j)
                    if (j != i) prod *= cdf(j, x);
                seg += kGlWeights[g] * prod;
            }
            total += half * seg;
        }
        p[i] = density * total;
    }

    const double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(sum > 0.0)) return uniform_simplex(k);
    for (double& x : p) x /= sum;
    return p;
}

std::vector<double> shaped_utility(std::span<const double> pi_ts_m, std::span<const double> pi_ts_main, double beta,
                                   double prob_floor) {
    require_same_size(pi_ts_m.size(), pi_ts_main.size());
    std::vector<double> u(pi_ts_m.size());
    for (std::size_t a = 0; a < u.size(); ++a) {
        const double u_m = clamped_log(pi_ts_m[a], prob_floor);
        const double u_main = clamped_log(pi_ts_main[a], prob_floor);
        u[a] = u_m - (u_m - u_main) / beta;
    }
    return u;
}

OptimalPolicy optimal_policy(std::span<const double> pi_b, std::span<const double> u_hat, double alpha) {
    require_same_size(pi_b.size(), u_hat.size());
    if (pi_b.empty()) throw std::invalid_argument("optimal_policy over an empty action set");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    // Shift exponents by their maximum so large alpha cannot underflow z.
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < pi_b.size(); ++a)
        if (pi_b[a] > 0.0) shift = std::max(shift, alpha * u_hat[a]);
    if (!std::isfinite(shift)) throw std::invalid_argument("behaviour policy has no support");

    OptimalPolicy out;
    out.pi.resize(pi_b.size());
    double scaled = 0.0;
    for (std::size_t a = 0; a < pi_b.size(); ++a) {
        out.pi[a] = pi_b[a] > 0.0 ? pi_b[a] * std::exp(alpha * u_hat[a] - shift) : 0.0;
        scaled += out.pi[a];
    }
    for (double& x : out.pi) x /= scaled;
    out.z = scaled * std::exp(shift);
    return out;
}

double free_energy(std::span<const double> pi, std::span<const double> pi_b, std::span<const double> pi_ts_main,
                   std::span<const double> pi_ts_m, double alpha, double beta, double prob_floor) {
    require_same_size(pi.size(), pi_b.size());
    require_same_size(pi.size(), pi_ts_main.size());
    require_same_size(pi.size(), pi_ts_m.size());
    double f = 0.0;
    for (std::size_t a = 0; a < pi.size(); ++a) {
        if (!(pi[a] > 0.0)) continue;
        if (!(pi_b[a] > 0.0)) return std::numeric_limits<double>::infinity();
        const double log_pi = std::log(pi[a]);
        const double u_m = clamped_log(pi_ts_m[a], prob_floor);
        const double u_main = clamped_log(pi_ts_main[a], prob_floor);
        f += pi[a] * ((log_pi - std::log(pi_b[a])) / alpha + (u_m - u_main) / beta - u_m);
    }
    return f;
}

SpacePolicyReport select_space(GridPos s, const Layout& layout, const QTable& table, const SpaceModel& spaces,
                               const FEParams& params, double epsilon) {
    const int k = static_cast<int>(layout.actions_at(s).size());
    const Neighborhood& nb = spaces.at(s);

    SpacePolicyReport report;
    auto& main = report[SpaceId::Main];
    auto& agg = report[SpaceId::Agg];
    for (int a = 0; a < k; ++a) {
        const auto& st = table.at(s, a);
        main.intervals.push_back(belief_interval(st.q, sample_stats(st), params.nu));

        const SampleStats pooled = pooled_stats(a, table, nb);
        const double center = pooled.n > 0 ? q_agg(a, table, nb) : 0.0;
        agg.intervals.push_back(belief_interval(center, pooled, params.nu));
    }

    for (auto* space : {&main, &agg}) {
        std::vector<double> centers;
        for (const auto& b : space->intervals) centers.push_back(b.center);
        space->pi_b = params.behavior == BehaviorSource::Space || space == &main
                          ? epsilon_greedy(centers, epsilon)
                          : std::vector<double>{};
        space->pi_ts = thompson_policy(space->intervals);
        space->sufficient = std::all_of(space->intervals.begin(), space->intervals.end(),
                                        [](const auto& b) { return b.sufficient; });
    }
    if (agg.pi_b.empty()) agg.pi_b = main.pi_b;
    for (auto* space : {&main, &agg}) {
        space->u_hat = shaped_utility(space->pi_ts, main.pi_ts, params.beta, params.prob_floor);
        space->pi_star = optimal_policy(space->pi_b, space->u_hat, params.alpha).pi;
        space->free_energy = free_energy(space->pi_star, space->pi_b, main.pi_ts, space->pi_ts, params.alpha,
                                         params.beta, params.prob_floor);
    }
    report.selected = agg.free_energy < main.free_energy - kSpaceTieTolerance ? SpaceId::Agg : SpaceId::Main;
    return report;
}

}  // namespace subgoal
