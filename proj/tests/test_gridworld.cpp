#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "subgoal/gridworld.hpp"

using namespace subgoal;

namespace {

Layout open3x3() { return parse_layout("...\n...\n..G\n", "open3x3"); }

LayoutError::Kind parse_error_kind(std::string_view text) {
    try {
        parse_layout(text);
    } catch (const LayoutError& e) {
        return e.kind();
    }
    FAIL("layout parsed without error");
    return LayoutError::Kind::Malformed;
}

}  // namespace

TEST_SUITE("gridworld") {

TEST_CASE("builtin catalog loads with the documented step caps") {
    const std::vector<std::string> names{"two_rooms",      "three_rooms",  "four_rooms", "transfer_action_rooms",
                                         "teleport_rooms", "hallway_room", "nine_rooms"};
    CHECK(builtin_layout_names() == names);
    CHECK(load_layout("two_rooms").max_steps == 100);
    CHECK(load_layout("three_rooms").max_steps == 100);
    CHECK(load_layout("transfer_action_rooms").max_steps == 100);
    CHECK(load_layout("teleport_rooms").max_steps == 100);
    CHECK(load_layout("four_rooms").max_steps == 500);
    CHECK(load_layout("nine_rooms").max_steps == 500);
    CHECK(load_layout("hallway_room").max_steps == 150);
}

TEST_CASE("two_rooms geometry") {
    const Layout l = load_layout("two_rooms");
    CHECK(l.rows() == 10);
    CHECK(l.cols() == 10);
    CHECK(l.is_open({5, 4}));
    for (int r = 0; r < 10; ++r)
        if (r != 5) CHECK(l.is_wall({r, 4}));
    CHECK(l.goal == GridPos{9, 9});
}

TEST_CASE("transfer layouts honour the fixed coordinates") {
    for (auto name : {"transfer_action_rooms", "teleport_rooms"}) {
        const Layout l = load_layout(name);
        REQUIRE(l.transfer_source);
        CHECK(*l.transfer_source == GridPos{4, 4});
        CHECK(*l.transfer_target == GridPos{8, 8});
    }
    CHECK(load_layout("transfer_action_rooms").num_actions() == 5);
    CHECK(load_layout("teleport_rooms").num_actions() == 4);
}

TEST_CASE("every corner start reaches the goal in every builtin") {
    for (const auto& name : builtin_layout_names()) {
        Layout l = load_layout(name);
        l.start_rule = StartRule::RandomCorner;
        CHECK_NOTHROW(validate_layout(l));
        CHECK(!l.start_cells().empty());
    }
}

TEST_CASE("reset") {
    Rng rng(3);
    Layout l = load_layout("two_rooms");
    CHECK(reset(l, rng) == GridPos{0, 0});

    l.start_rule = StartRule::RandomCorner;
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < 200; ++i) {
        const GridPos p = reset(l, rng);
        seen.insert({p.row, p.col});
        CHECK(p != l.goal);
    }
    CHECK(seen == std::set<std::pair<int, int>>{{0, 0}, {0, 9}, {9, 0}});

    Rng a(11), b(11);
    CHECK(reset(l, a) == reset(l, b));
}

TEST_CASE("deterministic moves") {
    const Layout l = open3x3();
    Rng rng(0);
    auto t = transition(l, {1, 1}, Action::Up, 0.0, rng);
    CHECK(t.next_state == GridPos{0, 1});
    CHECK(t.reward == -1.0);
    CHECK_FALSE(t.done);

    t = transition(l, {2, 1}, Action::Right, 0.0, rng);
    CHECK(t.next_state == GridPos{2, 2});
    CHECK(t.reward == 10.0);
    CHECK(t.done);

    t = transition(l, {0, 0}, Action::Left, 0.0, rng);
    CHECK(t.next_state == GridPos{0, 0});
    CHECK(t.reward == -10.0);
    CHECK(t.collided);

    const Layout two = load_layout("two_rooms");
    t = transition(two, {3, 3}, Action::Right, 0.0, rng);
    CHECK(t.next_state == GridPos{3, 3});
    CHECK(t.collided);
}

TEST_CASE("p_fail = 1 always slips to an open neighbour") {
    const Layout l = load_layout("two_rooms");
    Rng rng(5);
    std::map<std::pair<int, int>, int> hits;
    for (int i = 0; i < 4000; ++i) {
        const auto t = transition(l, {5, 4}, Action::Up, 1.0, rng);
        CHECK_FALSE(t.collided);
        hits[{t.next_state.row, t.next_state.col}] += 1;
    }
    // The doorway has exactly two open neighbours.
    REQUIRE(hits.size() == 2);
    CHECK(hits[{5, 3}] == doctest::Approx(2000).epsilon(0.06));
    CHECK(hits[{5, 5}] == doctest::Approx(2000).epsilon(0.06));
}

TEST_CASE("slip frequency matches p_fail") {
    const Layout l = open3x3();
    Rng rng(9);
    int slipped = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        // From (0,0) Down goes to (1,0); a slip lands on (0,1) half the time.
        if (transition(l, {0, 0}, Action::Down, 0.33, rng).next_state == GridPos{0, 1}) ++slipped;
    }
    CHECK(slipped / double(n) == doctest::Approx(0.165).epsilon(0.08));
}

TEST_CASE("teleport resolves before the goal check and still costs a step") {
    const Layout l = parse_layout("transfer_mode=teleport\n.T.\n...\n.tG\n");
    Rng rng(0);
    const auto t = transition(l, {0, 0}, Action::Right, 0.0, rng);
    CHECK(t.next_state == GridPos{2, 1});
    CHECK(t.reward == -1.0);
    CHECK_FALSE(t.done);
}

TEST_CASE("transfer action") {
    const Layout l = load_layout("transfer_action_rooms");
    Rng rng(0);
    const auto t = transition(l, {4, 4}, Action::Transfer, 0.0, rng);
    CHECK(t.next_state == GridPos{8, 8});
    CHECK(t.reward == -1.0);
    CHECK(l.actions_at({4, 4}).size() == 5);
    CHECK(l.actions_at({4, 3}).size() == 4);
    CHECK_THROWS_AS(transition(l, {4, 3}, Action::Transfer, 0.0, rng), InvalidAction);
    CHECK_THROWS_AS(transition(load_layout("two_rooms"), {0, 0}, Action::Transfer, 0.0, rng), InvalidAction);
    CHECK_THROWS_AS(transition(l, {0, 0}, static_cast<Action>(7), 0.0, rng), InvalidAction);
}

TEST_CASE("episodes end at the step cap") {
    GridWorld env(parse_layout("max_steps=5\n....\n...G\n"), 0.0, 1);
    env.reset();
    Transition t;
    int steps = 0;
    do {
        t = env.step(Action::Left);
        ++steps;
    } while (!t.done);
    CHECK(steps == 5);
    CHECK(env.done());
    CHECK_THROWS_AS(env.step(Action::Left), std::logic_error);
    env.reset();
    CHECK(env.steps() == 0);
}

TEST_CASE("random walks never exceed the cap and stay on open cells") {
    const Layout l = load_layout("four_rooms");
    GridWorld env(l, 0.33, 17);
    Rng pick(4);
    for (int ep = 0; ep < 20; ++ep) {
        env.reset();
        int steps = 0;
        while (true) {
            const auto t = env.step(static_cast<Action>(pick.index(4)));
            ++steps;
            CHECK(l.is_open(t.next_state));
            if (t.done) {
                CHECK((t.next_state == l.goal || steps == l.max_steps));
                break;
            }
        }
        CHECK(steps <= l.max_steps);
    }
}

TEST_CASE("same seed, same trajectory") {
    auto run = [](std::uint64_t seed) {
        GridWorld env(load_layout("two_rooms"), 0.5, seed);
        env.reset();
        std::vector<GridPos> path;
        for (int i = 0; i < 60; ++i) path.push_back(env.step(static_cast<Action>(i % 4)).next_state);
        return path;
    };
    CHECK(run(42) == run(42));
    CHECK(run(42) != run(43));
}

TEST_CASE("layout errors") {
    using K = LayoutError::Kind;
    CHECK(parse_error_kind("...\n...\n") == K::MissingGoal);
    CHECK(parse_error_kind("..G\n..G\n") == K::MultipleGoals);
    CHECK(parse_error_kind("...\n..\n..G\n") == K::Malformed);
    CHECK(parse_error_kind("..x\n..G\n") == K::Malformed);
    CHECK(parse_error_kind("max_steps=0\n..G\n") == K::Malformed);
    CHECK(parse_error_kind("colour=red\n..G\n") == K::Malformed);
    CHECK(parse_error_kind(".#.\n##.\n..G\n") == K::UnreachableGoal);
    CHECK(parse_error_kind("start=random_corner\n#.#\n...\n#.G\n") == K::NoStart);
    CHECK(parse_error_kind("transfer_mode=action\n...\n..G\n") == K::BadTransfer);
    CHECK(parse_error_kind("...\n.T.\n..G\n") == K::BadTransfer);
    CHECK_THROWS_AS(load_layout("no_such_layout"), LayoutError);
}

TEST_CASE("format_layout round-trips") {
    for (const auto& name : builtin_layout_names()) {
        const Layout l = load_layout(name);
        const Layout again = parse_layout(format_layout(l), name);
        CHECK(again.cells == l.cells);
        CHECK(again.max_steps == l.max_steps);
        CHECK(again.transfer_mode == l.transfer_mode);
        CHECK(again.start_rule == l.start_rule);
    }
}

TEST_CASE("layouts load from files") {
    const auto path = std::filesystem::temp_directory_path() / "subgoal_layout_test.txt";
    {
        std::ofstream f(path);
        f << "; a comment\nmax_steps=7\n..\n.G\n";
    }
    const Layout l = load_layout(path.string());
    CHECK(l.max_steps == 7);
    CHECK(l.goal == GridPos{1, 1});
    std::filesystem::remove(path);
}

}  // TEST_SUITE
