#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "subgoal/experiment.hpp"
#include "subgoal/learner.hpp"

using namespace subgoal;

TEST_SUITE("learner") {

TEST_CASE("sarsa update by hand") {
    QTable t(1, 2, 4);
    sarsa_update(t, {0, 0}, 1, -1.0, {0, 1}, 0, 0.5, 0.9);
    CHECK(t.q({0, 0}, 1) == doctest::Approx(-0.5));
    CHECK(t({0, 0}, 1).n == 1);
    CHECK(t({0, 0}, 1).s1 == doctest::Approx(-0.5));
    CHECK(t({0, 0}, 1).s2 == doctest::Approx(0.25));

    QTable u(1, 2, 4);
    u({0, 0}, 0).q = 1.0;
    sarsa_update(u, {0, 0}, 0, 10.0, {0, 1}, 0, 1.0, 0.9);
    CHECK(u.q({0, 0}, 0) == doctest::Approx(10.0));

    QTable w(1, 2, 4);
    w({0, 0}, 2).q = 3.0;
    sarsa_update(w, {0, 0}, 2, 5.0, {0, 1}, 0, 0.0, 0.9);
    CHECK(w.q({0, 0}, 2) == 3.0);
    CHECK(w({0, 0}, 2).n == 1);
}

TEST_CASE("non-finite values are rejected") {
    QTable t(1, 2, 4);
    t({0, 1}, 0).q = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(sarsa_update(t, {0, 0}, 0, -1.0, {0, 1}, 0, 0.5, 0.9), std::overflow_error);
}

TEST_CASE("running-sum deviation agrees with the two-pass oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 1000; ++trial) {
        const int len = 2 + static_cast<int>(rng.index(60));
        const double offset = (rng.uniform() - 0.5) * 40.0;
        std::vector<double> xs;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < len; ++i) {
            xs.push_back(offset + (rng.uniform() - 0.5) * 6.0);
            s1 += xs.back();
            s2 += xs.back() * xs.back();
        }
        CHECK(stddev_from_sums(len, s1, s2) == doctest::Approx(oracle::two_pass_stddev(xs)).epsilon(1e-6));
    }
    CHECK(stddev_from_sums(3, 6.0, 12.0) == 0.0);
    CHECK_THROWS_AS(stddev_from_sums(1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("schedules") {
    Schedules s;
    s.lambda_form = DecayForm::Geometric;
    CHECK(schedule_at(s, 0).lambda == doctest::Approx(0.99));
    CHECK(schedule_at(s, 0).epsilon == doctest::Approx(0.3));
    CHECK(schedule_at(s, 10).lambda == doctest::Approx(0.99 * std::pow(0.999, 10)));
    CHECK(schedule_at(s, 10).epsilon == doctest::Approx(0.3 * std::exp(-3.0)));

    s.lambda_form = DecayForm::Inverse;
    CHECK(lambda_at(s, 0) == doctest::Approx(0.99));
    CHECK(lambda_at(s, 1000) == doctest::Approx(0.495));

    for (auto form : {DecayForm::Geometric, DecayForm::Inverse}) {
        s.lambda_form = form;
        double prev_l = 2.0, prev_e = 2.0;
        for (std::int64_t k = 0; k < 200000; k += 997) {
            const auto v = schedule_at(s, k);
            CHECK(v.lambda < prev_l);
            CHECK(v.epsilon <= prev_e);
            prev_l = v.lambda;
            prev_e = v.epsilon;
        }
        CHECK(prev_l < 0.01);
        CHECK(prev_e < 1e-12);
    }
    CHECK_THROWS_AS(schedule_at(s, -1), std::invalid_argument);

    Schedules bad;
    bad.gamma = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("epsilon greedy") {
    const std::vector<double> q{1.0, 3.0, 2.0, 3.0};
    const auto p = epsilon_greedy(q, 0.2);
    CHECK(p[0] == doctest::Approx(0.05));
    CHECK(p[1] == doctest::Approx(0.45));
    CHECK(p[2] == doctest::Approx(0.05));
    CHECK(p[3] == doctest::Approx(0.45));

    Rng rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> qs(2 + rng.index(4));
        for (double& x : qs) x = std::round((rng.uniform() - 0.5) * 6.0);
        const auto pr = epsilon_greedy(qs, rng.uniform());
        double sum = 0.0;
        for (double x : pr) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("select_action") {
    Rng rng(4);
    const std::vector<double> p{0.1, 0.0, 0.6, 0.3};
    std::vector<int> counts(4, 0);
    for (int i = 0; i < 30000; ++i) counts[select_action(p, rng)] += 1;
    CHECK(counts[1] == 0);
    CHECK(counts[2] / 30000.0 == doctest::Approx(0.6).epsilon(0.03));
    CHECK_THROWS_AS(select_action(std::vector<double>{0.5, 0.4}, rng), std::invalid_argument);
    CHECK_THROWS_AS(select_action(std::vector<double>{1.5, -0.5}, rng), std::invalid_argument);
}

TEST_CASE("q-table csv round trip") {
    QTable t(2, 3, 5);
    Rng rng(8);
    for (int i = 0; i < 40; ++i) {
        const GridPos s{static_cast<int>(rng.index(2)), static_cast<int>(rng.index(3))};
        sarsa_update(t, s, static_cast<int>(rng.index(5)), rng.uniform() * 3 - 2, {0, 0}, 1, 0.37, 0.9);
    }
    std::stringstream buf;
    t.write_csv(buf);
    CHECK(buf.str().rfind("row,col,action,q,n,s1,s2,t_samples\n", 0) == 0);
    const QTable back = QTable::read_csv(buf, 2, 3, 5);
    CHECK(back == t);

    std::stringstream bad("row,col,action,q,n,s1,s2,t_samples\n0,0,9,1,1,1,1,1\n");
    CHECK_THROWS(QTable::read_csv(bad, 2, 3, 5));
}

TEST_CASE("sarsa on a 3x3 grid converges to the value-iteration greedy policy") {
    RunConfig c;
    c.p_fail = 0.0;
    const Layout l = parse_layout("max_steps=50\n...\n...\n..G\n", "open3x3");
    const auto q_star = oracle::value_iteration(l, 0.0, c.schedules.gamma);

    SeedRunner runner(c, l, 7);
    EpisodeResult last;
    for (int e = 0; e < 500; ++e) last = runner.run_episode();

    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) {
            const GridPos s{r, col};
            if (s == l.goal) continue;
            const auto& opt = q_star[static_cast<std::size_t>(r * 3 + col)];
            const double best = *std::max_element(opt.begin(), opt.end());
            const auto learned = runner.table().q_values(s, 4);
            const int greedy =
                static_cast<int>(std::max_element(learned.begin(), learned.end()) - learned.begin());
            CAPTURE(r);
            CAPTURE(col);
            CHECK(opt[static_cast<std::size_t>(greedy)] == doctest::Approx(best).epsilon(1e-9));
        }
    // Start (0,0) is four moves from the goal: three -1 steps then +10.
    CHECK(last.total_return == doctest::Approx(7.0));
}

}  // TEST_SUITE
