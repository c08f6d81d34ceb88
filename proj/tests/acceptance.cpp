// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero
// if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>

#include "oracles.hpp"
#include "subgoal/experiment.hpp"

using namespace subgoal;

namespace {

bool near_any(const std::vector<GridPos>& cells, const std::vector<GridPos>& doors) {
    for (auto p : cells)
        for (auto d : doors)
            if (std::abs(p.row - d.row) <= 1 && std::abs(p.col - d.col) <= 1) return true;
    return false;
}

struct DoorwayStats {
    int seeds = 0;
    int hits = 0;
    int baseline_hits = 0;
    int differ = 0;
    double seconds = 0.0;
};

DoorwayStats doorway_run(RunConfig c, const std::vector<GridPos>& doors) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto summary = run_experiment(c, false);
    DoorwayStats out;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& s : summary.seeds) {
        const auto& cp = s.checkpoints.back();
        ++out.seeds;
        out.hits += near_any(cp.model_change.cells, doors);
        out.baseline_hits += near_any(cp.baseline.cells, doors);
        out.differ += cp.model_change.cells != cp.baseline.cells;
    }
    return out;
}

std::vector<double> random_simplex(Rng& rng, std::size_t k) {
    std::vector<double> p(k);
    for (double& x : p) x = rng.bernoulli(0.2) ? 0.0 : -std::log(1.0 - rng.uniform());
    double sum = std::accumulate(p.begin(), p.end(), 0.0);
    if (sum == 0.0) {
        p[rng.index(k)] = 1.0;
        sum = 1.0;
    }
    for (double& x : p) x /= sum;
    return p;
}

bool simplex_ok(const std::vector<double>& p) {
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0)) return false;
        s += x;
    }
    return std::abs(s - 1.0) <= 1e-9;
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

}  // namespace

int main() {
    const std::vector<GridPos> two_rooms_door{{5, 4}};
    const std::vector<GridPos> three_rooms_doors{{6, 3}, {3, 7}};

    // 1 and 3 share the default two_rooms run.
    RunConfig base;
    const auto c1 = doorway_run(base, two_rooms_door);
    report(1, c1.hits >= 8 && c1.seconds < 30.0,
           fmt("doorway within 1 cell in %d/%d seeds at episode %d, %.2f s", c1.hits, c1.seeds, base.episodes,
               c1.seconds));

    {
        RunConfig c = base;
        c.p_fail = 0.5;
        const auto two = doorway_run(c, two_rooms_door);
        c.layout = "three_rooms";
        c.episodes = 80;
        const auto three = doorway_run(c, three_rooms_doors);
        report(2, two.hits >= 6 && three.hits >= 6,
               fmt("p=0.5: two_rooms %d/%d seeds, three_rooms (80 episodes) %d/%d seeds", two.hits, two.seeds,
                   three.hits, three.seeds));
    }

    report(3, c1.differ >= 8 && c1.hits > c1.baseline_hits,
           fmt("masks differ in %d/%d seeds; doorway hits %d (model changes) vs %d (visit frequency)", c1.differ,
               c1.seeds, c1.hits, c1.baseline_hits));

    {
        Rng rng(2024), draws(2025);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<BeliefInterval> iv(2 + rng.index(4));
            for (auto& b : iv) b = {(rng.uniform() - 0.5) * 6.0, 0.02 + rng.uniform() * 2.5, true};
            worst = std::max(worst, oracle::total_variation(thompson_policy(iv),
                                                            oracle::monte_carlo_thompson(iv, 100000, draws)));
        }
        const auto p = thompson_policy(std::vector<BeliefInterval>{{1, 1, true}, {2, 1, true}});
        const double err = std::max(std::abs(p[0] - 0.125), std::abs(p[1] - 0.875));
        report(4, worst < 0.01 && err < 1e-3,
               fmt("max total variation %.4f over 100 configurations; [0,2] vs [1,3] error %.1e", worst, err));
    }

    {
        Rng rng(7);
        int bad = 0;
        double worst = -1e300;
        const FEParams fp;
        for (int inst = 0; inst < 1000; ++inst) {
            const std::size_t k = 2 + rng.index(4);
            const auto pb = random_simplex(rng, k), ts_main = random_simplex(rng, k), ts_m = random_simplex(rng, k);
            const auto u = shaped_utility(ts_m, ts_main, fp.beta, fp.prob_floor);
            const auto star = optimal_policy(pb, u, fp.alpha).pi;
            const double f_star = free_energy(star, pb, ts_main, ts_m, fp.alpha, fp.beta, fp.prob_floor);
            for (int c = 0; c < 1000; ++c) {
                const auto cand = random_simplex(rng, k);
                const double gap = f_star - free_energy(cand, pb, ts_main, ts_m, fp.alpha, fp.beta, fp.prob_floor);
                worst = std::max(worst, gap);
                if (gap > 1e-9) ++bad;
            }
        }
        report(5, bad == 0, fmt("%d of 10^6 candidates beat the closed form; largest F(pi*) - F(pi) = %.3g", bad, worst));
    }

    {
        Rng rng(6);
        int mismatches = 0;
        for (int trial = 0; trial < 100; ++trial) {
            CountGrid g(2 + static_cast<int>(rng.index(15)), 2 + static_cast<int>(rng.index(15)), 0);
            const std::size_t top = trial % 4 == 0 ? 4 : 500;
            for (auto& v : g.values()) v = static_cast<std::int64_t>(rng.index(top));
            const MaskGrid all(g.rows(), g.cols(), 1);
            if (!(otsu_threshold(g, all).mask == oracle::exhaustive_otsu(g, all))) ++mismatches;
        }
        report(6, mismatches == 0, fmt("%d mismatches against exhaustive search on 100 matrices", mismatches));
    }

    {
        const auto root = std::filesystem::temp_directory_path() / "subgoal_acceptance_determinism";
        std::filesystem::remove_all(root);
        RunConfig c = base;
        c.seeds = 3;
        c.trace = true;
        for (const char* run : {"a", "b"}) {
            c.out_dir = (root / run).string();
            run_experiment(c);
        }
        auto slurp = [](const std::filesystem::path& p) {
            std::ifstream f(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
        };
        int compared = 0, differing = 0;
        for (const auto& e : std::filesystem::directory_iterator(root / "a")) {
            if (e.path().extension() != ".csv") continue;
            ++compared;
            if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) ++differing;
        }
        std::filesystem::remove_all(root);
        report(7, compared > 0 && differing == 0, fmt("%d CSV artifacts compared, %d differ", compared, differing));
    }

    {
        Rng rng(8);
        int simplex_fail = 0, mc_fail = 0, convex_fail = 0, nb_fail = 0;
        const int cases = 1000;

        for (int i = 0; i < cases; ++i) {
            const std::size_t k = 2 + rng.index(4);
            std::vector<BeliefInterval> iv(k);
            for (auto& b : iv) b = {std::round((rng.uniform() - 0.5) * 8) / 2, rng.bernoulli(0.2) ? 0.0 : rng.uniform() * 2, true};
            const auto ts = thompson_policy(iv);
            std::vector<double> q(k), u(k);
            for (std::size_t a = 0; a < k; ++a) {
                q[a] = iv[a].center;
                u[a] = -rng.uniform() * 20;
            }
            const auto pb = epsilon_greedy(q, rng.uniform());
            const auto star = optimal_policy(pb, u, 4.0).pi;
            if (!simplex_ok(ts) || !simplex_ok(pb) || !simplex_ok(star)) ++simplex_fail;
        }

        const Layout two = load_layout("two_rooms");
        ModelChangeMatrix mc(two);
        SpaceId prev = SpaceId::Main;
        for (int i = 0; i < cases; ++i) {
            const CountGrid before = mc.counts();
            const GridPos p{static_cast<int>(rng.index(10)), static_cast<int>(rng.index(10))};
            const SpaceId cur = rng.bernoulli(0.5) ? SpaceId::Agg : SpaceId::Main;
            mc.record_step(prev, cur, p);
            std::int64_t delta = 0;
            for (std::size_t j = 0; j < before.size(); ++j) {
                if (mc.counts().values()[j] < before.values()[j]) ++mc_fail;
                delta += mc.counts().values()[j] - before.values()[j];
            }
            if (delta != (prev != cur && two.is_open(p) ? 1 : 0)) ++mc_fail;
            prev = cur;
        }

        const SpaceModel sm(two, Metric::Euclidean, 2.0);
        for (int i = 0; i < cases; ++i) {
            QTable t(10, 10, 4);
            GridPos s;
            do s = {static_cast<int>(rng.index(10)), static_cast<int>(rng.index(10))};
            while (two.is_wall(s));
            double lo = 1e300, hi = -1e300;
            for (auto m : sm.at(s).members) {
                auto& st = t(m, 0);
                st.q = (rng.uniform() - 0.5) * 30;
                st.n = 1 + static_cast<std::int64_t>(rng.index(40));
                lo = std::min(lo, st.q);
                hi = std::max(hi, st.q);
            }
            const double v = q_agg(0, t, sm.at(s));
            if (v < lo - 1e-12 || v > hi + 1e-12) ++convex_fail;

            const auto& nb = sm.at(s);
            std::vector<GridPos> expect;
            for (int r = s.row - 1; r <= s.row + 1; ++r)
                for (int c = s.col - 1; c <= s.col + 1; ++c)
                    if (two.is_open({r, c})) expect.push_back({r, c});
            if (nb.members != expect) ++nb_fail;
        }
        report(8, simplex_fail + mc_fail + convex_fail + nb_fail == 0,
               fmt("%d cases each: simplex %d, model-change monotonicity %d, q_agg bounds %d, 3x3 neighbourhood %d "
                   "failures",
                   cases, simplex_fail, mc_fail, convex_fail, nb_fail));
    }

    return failures == 0 ? 0 : 1;
}
