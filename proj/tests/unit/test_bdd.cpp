#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "besynth/bdd.hpp"

using namespace besynth;

namespace {

/// Reference truth table of a BDD over the first `n` variables.
std::vector<bool> table_of(DdManager& mgr, const Bdd& f, std::size_t n) {
    std::vector<bool> table(std::size_t{1} << n);
    for (std::size_t row = 0; row < table.size(); ++row)
        table[row] = mgr.eval(f, [&](std::uint32_t v) { return (row >> v) & 1u; });
    return table;
}

/// Random expression built from vars, constants, and {&, |, ^, !}.
Bdd random_expr(DdManager& mgr, std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, 5);
    if (depth == 0) {
        std::uniform_int_distribution<std::uint32_t> var_pick(
            0, static_cast<std::uint32_t>(mgr.var_count() - 1));
        switch (pick(rng)) {
            case 0: return mgr.bdd_true();
            case 1: return mgr.bdd_false();
            default: return mgr.var(var_pick(rng));
        }
    }
    switch (pick(rng)) {
        case 0: return !random_expr(mgr, rng, depth - 1);
        case 1: return random_expr(mgr, rng, depth - 1) ^ random_expr(mgr, rng, depth - 1);
        case 2:
        case 3: return random_expr(mgr, rng, depth - 1) & random_expr(mgr, rng, depth - 1);
        default: return random_expr(mgr, rng, depth - 1) | random_expr(mgr, rng, depth - 1);
    }
}

}  // namespace

TEST_CASE("basic boolean identities", "[bdd]") {
    DdManager mgr;
    std::uint32_t xi = mgr.new_var();
    Bdd x = mgr.var(xi);

    REQUIRE((x & !x).is_false());
    REQUIRE((x | !x).is_true());
    REQUIRE(mgr.ite(x, mgr.bdd_true(), mgr.bdd_false()) == x);
    REQUIRE((x ^ x).is_false());
    REQUIRE(x.implies(x).is_true());
    REQUIRE(x.iff(!x).is_false());
}

TEST_CASE("canonicity equals truth-table equality", "[bdd][property]") {
    DdManager mgr;
    for (int i = 0; i < 4; ++i) mgr.new_var();
    std::mt19937 rng(41);
    for (int round = 0; round < 1000; ++round) {
        Bdd f = random_expr(mgr, rng, 3);
        Bdd g = random_expr(mgr, rng, 3);
        bool same_function = table_of(mgr, f, 4) == table_of(mgr, g, 4);
        REQUIRE((f == g) == same_function);
    }
}

TEST_CASE("quantification", "[bdd]") {
    DdManager mgr;
    std::uint32_t xi = mgr.new_var();
    std::uint32_t yi = mgr.new_var();
    Bdd x = mgr.var(xi), y = mgr.var(yi);
    Bdd xs = mgr.cube({xi});

    REQUIRE(mgr.exists(xs, x).is_true());
    REQUIRE(mgr.forall(xs, x).is_false());
    // forall x. (x -> y) == y
    REQUIRE(mgr.forall(xs, x.implies(y)) == y);
    // Result no longer depends on the quantified variables.
    Bdd both = mgr.cube({xi, yi});
    REQUIRE(mgr.exists(both, x & y).is_true());
    REQUIRE(mgr.forall(both, x | y).is_false());
}

TEST_CASE("quantifier duality", "[bdd][property]") {
    DdManager mgr;
    for (int i = 0; i < 4; ++i) mgr.new_var();
    Bdd cube = mgr.cube({0, 2});
    std::mt19937 rng(43);
    for (int round = 0; round < 300; ++round) {
        Bdd f = random_expr(mgr, rng, 3);
        REQUIRE(mgr.forall(cube, f) == !mgr.exists(cube, !f));
    }
}

TEST_CASE("vector compose", "[bdd]") {
    DdManager mgr;
    std::uint32_t zi = mgr.new_var();
    std::uint32_t z2i = mgr.new_var();
    std::uint32_t xi = mgr.new_var();
    std::uint32_t yi = mgr.new_var();
    Bdd z = mgr.var(zi), z2 = mgr.var(z2i), x = mgr.var(xi), y = mgr.var(yi);

    REQUIRE(mgr.compose(z, {{zi, x & y}}) == (x & y));
    REQUIRE(mgr.compose(z | z2, {{zi, x}, {z2i, x}}) == x);
    // Simultaneous: swapping z and z2 is an involution, not a collapse.
    Bdd swapped = mgr.compose(z & !z2, {{zi, z2}, {z2i, z}});
    REQUIRE(swapped == (z2 & !z));
}

TEST_CASE("compose agrees with truth tables", "[bdd][property]") {
    DdManager mgr;
    for (int i = 0; i < 4; ++i) mgr.new_var();
    std::mt19937 rng(47);
    for (int round = 0; round < 200; ++round) {
        Bdd f = random_expr(mgr, rng, 2);
        Bdd g0 = random_expr(mgr, rng, 2);
        Bdd g1 = random_expr(mgr, rng, 2);
        Bdd composed = mgr.compose(f, {{0, g0}, {1, g1}});
        for (std::size_t row = 0; row < 16; ++row) {
            auto value = [&](std::uint32_t v) -> bool { return (row >> v) & 1u; };
            bool expected = mgr.eval(f, [&](std::uint32_t v) {
                if (v == 0) return mgr.eval(g0, value);
                if (v == 1) return mgr.eval(g1, value);
                return value(v);
            });
            REQUIRE(mgr.eval(composed, value) == expected);
        }
    }
}

TEST_CASE("pick_witness prefers false", "[bdd]") {
    DdManager mgr;
    std::uint32_t yi = mgr.new_var();
    std::uint32_t y2i = mgr.new_var();
    Bdd y = mgr.var(yi), y2 = mgr.var(y2i);

    auto w1 = mgr.pick_witness(y, {yi});
    REQUIRE(w1 == std::vector<std::pair<std::uint32_t, bool>>{{yi, true}});

    auto w2 = mgr.pick_witness(!y, {yi});
    REQUIRE(w2 == std::vector<std::pair<std::uint32_t, bool>>{{yi, false}});

    // Two satisfying rows; the witness must satisfy the relation.
    Bdd f = y ^ y2;
    auto w3 = mgr.pick_witness(f, {yi, y2i});
    std::vector<bool> assignment(2);
    for (auto [v, value] : w3) assignment[v] = value;
    REQUIRE(mgr.eval(f, assignment));
    // Tie at the first variable: false preferred.
    REQUIRE(w3.front() == std::pair<std::uint32_t, bool>{yi, false});

    REQUIRE_THROWS_AS(mgr.pick_witness(mgr.bdd_false(), {yi}), std::invalid_argument);
}

TEST_CASE("cache soundness", "[bdd][property]") {
    DdManager cached(DdManager::node_limit_from_env(), true);
    DdManager uncached(DdManager::node_limit_from_env(), false);
    for (int i = 0; i < 4; ++i) {
        cached.new_var();
        uncached.new_var();
    }
    std::mt19937 rng_a(53), rng_b(53);
    for (int round = 0; round < 200; ++round) {
        Bdd f = random_expr(cached, rng_a, 4);
        Bdd g = random_expr(uncached, rng_b, 4);
        REQUIRE(table_of(cached, f, 4) == table_of(uncached, g, 4));
    }
}

TEST_CASE("manager mismatch is rejected", "[bdd]") {
    DdManager a, b;
    a.new_var();
    b.new_var();
    Bdd x = a.var(0);
    Bdd y = b.var(0);
    REQUIRE_THROWS_AS(a.apply_and(x, y), std::invalid_argument);
}

TEST_CASE("node limit", "[bdd]") {
    DdManager mgr(8);
    for (int i = 0; i < 12; ++i) mgr.new_var();
    auto blow_up = [&] {
        Bdd acc = mgr.bdd_true();
        for (std::uint32_t i = 0; i < 12; ++i)
            acc = acc & (i % 2 ? mgr.var(i) : !mgr.var(i));
        return acc;
    };
    REQUIRE_THROWS_AS(blow_up(), ResourceLimitError);
}

TEST_CASE("garbage collection keeps referenced nodes", "[bdd]") {
    DdManager mgr;
    std::uint32_t xi = mgr.new_var();
    std::uint32_t yi = mgr.new_var();
    Bdd keep = mgr.var(xi) & !mgr.var(yi);
    {
        Bdd scratch = mgr.var(xi) ^ mgr.var(yi);
        Bdd more = scratch | keep;
        (void)more;
    }
    std::size_t before = mgr.live_node_count();
    mgr.collect_garbage();
    REQUIRE(mgr.live_node_count() < before);
    REQUIRE(mgr.eval(keep, std::vector<bool>{true, false}));
    REQUIRE(!mgr.eval(keep, std::vector<bool>{true, true}));
    // The canonical node is still found by the unique table.
    REQUIRE((mgr.var(xi) & !mgr.var(yi)) == keep);
}

TEST_CASE("dot dump smoke", "[bdd]") {
    DdManager mgr;
    mgr.new_var();
    mgr.new_var();
    Bdd f = mgr.var(0) & mgr.var(1);
    std::string dot = mgr.to_dot(f, {"x", "y"});
    REQUIRE(dot.find("digraph bdd") != std::string::npos);
    REQUIRE(dot.find("label=\"x\"") != std::string::npos);
}

TEST_CASE("node limit override from the environment", "[bdd]") {
    setenv("BESYNTH_NODE_LIMIT", "8", 1);
    DdManager mgr;  // picks up the override
    unsetenv("BESYNTH_NODE_LIMIT");
    for (int i = 0; i < 12; ++i) mgr.new_var();
    auto blow_up = [&] {
        Bdd acc = mgr.bdd_true();
        for (std::uint32_t i = 0; i < 12; ++i)
            acc = acc & (i % 2 ? mgr.var(i) : !mgr.var(i));
        return acc;
    };
    REQUIRE_THROWS_AS(blow_up(), ResourceLimitError);
}
