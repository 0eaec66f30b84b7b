#include "doctest.h"

#include <vector>

#include "entropywalk/entropy.hpp"
#include "entropywalk/errors.hpp"
#include "entropywalk/graph.hpp"
#include "entropywalk/walker.hpp"

using namespace entropywalk;

namespace {

std::vector<Tour> collect_tours(const Graph& g, const WalkParams& p, unsigned threads,
                                double et = 1.0) {
    std::vector<Tour> out;
    run_tours(
        g, p, [&](const Tour& t) { return accept_tour(t, et); },
        [&](const Tour& t) { out.push_back(t); }, threads);
    return out;
}

} // namespace

TEST_CASE("parameter validation catches every bad combination") {
    WalkParams p;
    p.validate(); // defaults are fine

    auto expect_bad = [](auto&& tweak) {
        WalkParams q;
        tweak(q);
        CHECK_THROWS_AS(q.validate(), ConfigError);
    };
    expect_bad([](WalkParams& q) { q.length = 1; });
    expect_bad([](WalkParams& q) { q.min_members = 0; });
    expect_bad([](WalkParams& q) { q.min_members = 11; }); // > max_members
    expect_bad([](WalkParams& q) { q.max_members = 99; }); // > length
    expect_bad([](WalkParams& q) { q.entropy_threshold = 0.0; });
    expect_bad([](WalkParams& q) { q.entropy_threshold = 1.5; });
}

TEST_CASE("random_tour walks along edges for exactly `length` visits") {
    Graph g = generate_ring_of_cliques(3, 4);
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Tour t = random_tour(g, 0, 12, rng);
        REQUIRE(t.complete);
        REQUIRE(t.visits.size() == 12);
        CHECK(t.visits.front() == 0);
        CHECK(t.start == 0);
        for (size_t s = 0; s + 1 < t.visits.size(); ++s)
            CHECK(g.has_edge(t.visits[s], t.visits[s + 1]));
        uint32_t total = 0;
        for (const auto& [v, c] : t.freq) {
            CHECK(t.count_of(v) == c);
            total += c;
        }
        CHECK(total == 12);
        CHECK(t.count_of(9999) == 0);
    }

    Graph iso;
    iso.intern("alone");
    SplitMix64 rng2(1);
    CHECK_THROWS_AS(random_tour(iso, 0, 5, rng2), ConfigError);
}

TEST_CASE("dead ends mark tours incomplete and starve impossible runs") {
    Graph g(true);
    NodeId a = g.intern("a"), b = g.intern("b");
    g.add_edge(a, b); // b has no way out
    SplitMix64 rng(3);
    Tour t = random_tour(g, a, 5, rng);
    CHECK_FALSE(t.complete);
    CHECK(t.visits == std::vector<NodeId>{a, b});

    WalkParams p;
    p.tours = 1;
    p.length = 5;
    p.min_members = 1;
    p.max_members = 2;
    CHECK_THROWS_AS(run_tours(g, p, [](const Tour&) { return true; }, {}, 1), ConfigError);
}

TEST_CASE("run_tours accounts for every tour and enforces preconditions") {
    Graph g = generate_barabasi_albert(50, 2, 11);
    WalkParams p;
    p.tours = 500;
    p.length = 10;
    p.min_members = 2;
    p.max_members = 6;
    p.master_seed = 42;

    uint64_t sunk = 0;
    RunStats stats = run_tours(
        g, p, [&](const Tour& t) { return tour_entropy(t).ratio <= 0.8; },
        [&](const Tour&) { ++sunk; }, 2);
    CHECK(stats.tours == 500);
    CHECK(stats.accepted + stats.rejected == 500);
    CHECK(stats.accepted == sunk);
    CHECK(stats.attempts >= 500);
    CHECK(stats.wall_seconds >= 0.0);

    p.tours = 0;
    RunStats zero = run_tours(g, p, [](const Tour&) { return true; },
                              [](const Tour&) { FAIL("sink must not run"); }, 4);
    CHECK(zero.tours == 0);
    CHECK(zero.accepted == 0);

    Graph empty;
    empty.intern("only");
    p.tours = 1;
    CHECK_THROWS_AS(run_tours(empty, p, [](const Tour&) { return true; }, {}, 1), ConfigError);
}

TEST_CASE("identical seeds give identical tour streams for any worker count") {
    Graph g = generate_barabasi_albert(120, 3, 5);
    WalkParams p;
    p.tours = 800;
    p.length = 18;
    p.min_members = 3;
    p.max_members = 9;
    p.master_seed = 1234;

    auto t1 = collect_tours(g, p, 1, 0.85);
    auto t4 = collect_tours(g, p, 4, 0.85);
    auto t8 = collect_tours(g, p, 8, 0.85);
    REQUIRE(t1.size() == t4.size());
    REQUIRE(t1.size() == t8.size());
    CHECK(t1.size() > 0);
    for (size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].visits == t4[i].visits);
        CHECK(t1[i].visits == t8[i].visits);
    }

    p.master_seed = 1235;
    auto other = collect_tours(g, p, 1, 0.85);
    bool any_difference = other.size() != t1.size();
    for (size_t i = 0; !any_difference && i < t1.size(); ++i)
        any_difference = t1[i].visits != other[i].visits;
    CHECK(any_difference);
}

TEST_CASE("pinned starts cover personalized runs") {
    Graph g = generate_ring_of_cliques(3, 5);
    WalkParams p;
    p.tours = 300;
    p.length = 12;
    p.min_members = 3;
    p.max_members = 8;

    std::vector<Tour> tours;
    personalized_tours(
        g, p, 7, [](const Tour&) { return true; },
        [&](const Tour& t) { tours.push_back(t); }, 2);
    REQUIRE(tours.size() == 300);
    for (const auto& t : tours) CHECK(t.visits.front() == 7);

    Graph iso;
    iso.intern("a");
    NodeId lone = iso.intern("b");
    iso.add_edge(0, 1);
    iso.remove_edge(0, 1);
    CHECK_THROWS_AS(personalized_tours(iso, p, lone, [](const Tour&) { return true; }, {}, 1),
                    ConfigError);
}

TEST_CASE("sink exceptions surface to the caller") {
    Graph g = generate_barabasi_albert(30, 2, 2);
    WalkParams p;
    p.tours = 200;
    p.length = 8;
    p.min_members = 2;
    p.max_members = 8;
    CHECK_THROWS_AS(run_tours(
                        g, p, [](const Tour&) { return true; },
                        [](const Tour&) { throw std::runtime_error("boom"); }, 3),
                    std::runtime_error);
}
