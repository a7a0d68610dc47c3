#include <catch2/catch_amalgamated.hpp>

#include <queue>
#include <random>
#include <set>

#include "besynth/counter_game.hpp"
#include "besynth/parser.hpp"
#include "besynth/pipelines.hpp"
#include "support/random_gen.hpp"

using namespace besynth;

namespace {

/// All arena states reachable from the initial assignment when the agent
/// plays `strategy` and the environment plays arbitrarily.
std::vector<std::vector<bool>> reachable_under(const SynthesisResult& result,
                                               const PositionalStrategy& strategy) {
    DdManager& mgr = *result.mgr;
    const SymbolicArena& arena = result.arena;
    const std::size_t env_count = arena.partition.env_count();
    std::set<std::vector<bool>> seen;
    std::queue<std::vector<bool>> queue;
    seen.insert(arena.initial);
    queue.push(arena.initial);
    while (!queue.empty()) {
        std::vector<bool> state = queue.front();
        queue.pop();
        auto lookup = arena.state_lookup(state);
        auto move = strategy.respond(mgr, lookup);
        for (Letter x = 0; x < (Letter{1} << env_count); ++x) {
            std::unordered_map<std::uint32_t, bool> values;
            for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
                values[arena.state_vars[i]] = state[i];
            for (std::size_t i = 0; i < env_count; ++i)
                values[arena.alphabet.env_vars[i]] = (x >> i) & 1u;
            for (const auto& [var, value] : move) values[var] = value;
            auto full = [&](std::uint32_t v) {
                auto it = values.find(v);
                return it != values.end() && it->second;
            };
            std::vector<bool> next(arena.state_vars.size());
            for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
                next[i] = mgr.eval(arena.eta[i], full);
            if (seen.insert(next).second) queue.push(next);
        }
    }
    return {seen.begin(), seen.end()};
}

SynthesisResult run_counter(int algorithm, int bits, int requests) {
    FormulaStore store(counter_partition(bits));
    Problem problem = gen_counter_game(store, {bits, requests});
    return run_algorithm(algorithm, problem);
}

}  // namespace

TEST_CASE("trivial realizable problem", "[pipelines]") {
    FormulaStore store(Partition({"x"}, {"y"}));
    Problem problem{&store, store.tt(), parse_formula(store, "F y")};
    for (int algorithm : {1, 2, 3}) {
        SynthesisResult result = run_algorithm(algorithm, problem);
        REQUIRE(result.realizable);
        REQUIRE(result.env_enforceable);
        // Realizable: every state reachable under the combined strategy lies
        // in the winning region, so kappa plays tau throughout.
        for (const auto& state : reachable_under(result, result.combined_strategy))
            REQUIRE(result.mgr->eval(result.adversarial_region,
                                     result.arena.state_lookup(state)));
    }
}

TEST_CASE("counter game verdicts per algorithm", "[pipelines]") {
    struct Case {
        int bits, requests;
        bool realizable;
    };
    // Realizable exactly when K >= 2^n - 1.
    for (Case c : std::initializer_list<Case>{{1, 1, true}, {2, 1, false}, {2, 3, true}}) {
        for (int algorithm : {1, 2, 3}) {
            SynthesisResult result = run_counter(algorithm, c.bits, c.requests);
            INFO("n=" << c.bits << " K=" << c.requests << " alg=" << algorithm);
            REQUIRE(result.realizable == c.realizable);
            REQUIRE(result.env_enforceable);
        }
    }
}

TEST_CASE("instrumentation exposes translation counts and sizes", "[pipelines]") {
    FormulaStore store(counter_partition(2));
    Problem problem = gen_counter_game(store, {2, 2});

    SynthesisResult r1 = synth_monolithic(problem);
    REQUIRE(r1.translation_count == 3);
    REQUIRE(r1.objective_automaton_sizes.size() == 3);

    SynthesisResult r2 = synth_explicit_compositional(problem);
    REQUIRE(r2.translation_count == 2);
    // The !E automaton is the complement of the minimal automaton for E.
    FormulaStore fresh(counter_partition(2));
    ExplicitDfa a_env = translate(fresh, counter_env_spec(fresh, 2));
    REQUIRE(r2.objective_automaton_sizes[1] == a_env.state_count);

    SynthesisResult r3 = synth_symbolic_compositional(problem);
    REQUIRE(r3.translation_count == 2);
    // Arena state-variable count is the sum of the component counts.
    REQUIRE(r3.component_state_var_counts.size() == 2);
    REQUIRE(r3.arena.state_vars.size() ==
            r3.component_state_var_counts[0] + r3.component_state_var_counts[1]);

    SynthesisResult rr = synth_reactive(problem);
    REQUIRE(rr.translation_count == 1);
    REQUIRE(rr.realizable == r1.realizable);
}

TEST_CASE("cross-algorithm agreement on random problems", "[pipelines][property]") {
    std::mt19937 rng(83);
    Partition partition({"x"}, {"y"});
    for (int round = 0; round < 25; ++round) {
        FormulaStore store(partition);
        Problem problem{&store, test::random_formula(store, rng, 4),
                        test::random_formula(store, rng, 4)};
        SynthesisResult r1 = synth_monolithic(problem);
        SynthesisResult r2 = synth_explicit_compositional(problem);
        SynthesisResult r3 = synth_symbolic_compositional(problem);
        REQUIRE(r1.realizable == r2.realizable);
        REQUIRE(r2.realizable == r3.realizable);
        REQUIRE(r1.env_enforceable == r2.env_enforceable);
        REQUIRE(r2.env_enforceable == r3.env_enforceable);
    }
}

TEST_CASE("cooperative region stays inside the restriction", "[pipelines]") {
    for (int algorithm : {1, 2, 3}) {
        SynthesisResult result = run_counter(algorithm, 2, 1);
        REQUIRE((result.cooperative_region & !result.env_region).is_false());
    }
}

TEST_CASE("non-enforceable environment is diagnosed, synthesis proceeds",
          "[pipelines]") {
    FormulaStore store(Partition({"x"}, {"y"}));
    // The environment cannot enforce falsehood.
    Problem problem{&store, store.ff(), parse_formula(store, "F y")};
    for (int algorithm : {1, 2, 3}) {
        SynthesisResult result = run_algorithm(algorithm, problem);
        REQUIRE(!result.env_enforceable);
        // E -> phi is vacuously enforced.
        REQUIRE(result.realizable);
    }
}

TEST_CASE("combine selects pointwise", "[pipelines]") {
    DdManager mgr;
    std::uint32_t z0 = mgr.new_var();
    std::uint32_t z1 = mgr.new_var();
    std::uint32_t z2 = mgr.new_var();
    std::uint32_t y = mgr.new_var();

    PositionalStrategy winning{{{y, mgr.bdd_true()}}};
    PositionalStrategy cooperative{{{y, mgr.var(z2)}}};

    REQUIRE(combine(mgr, winning, cooperative, mgr.bdd_true()).outputs[0].second ==
            winning.outputs[0].second);
    REQUIRE(combine(mgr, winning, cooperative, mgr.bdd_false()).outputs[0].second ==
            cooperative.outputs[0].second);

    // Mixed region over three state bits: check all eight rows.
    Bdd region = mgr.var(z0) ^ mgr.var(z1);
    PositionalStrategy mixed = combine(mgr, winning, cooperative, region);
    for (int row = 0; row < 8; ++row) {
        auto value = [&](std::uint32_t v) {
            if (v == z0) return (row & 1) != 0;
            if (v == z1) return (row & 2) != 0;
            if (v == z2) return (row & 4) != 0;
            return false;
        };
        bool expected = mgr.eval(region, value)
                            ? mgr.eval(winning.outputs[0].second, value)
                            : mgr.eval(cooperative.outputs[0].second, value);
        REQUIRE(mgr.eval(mixed.outputs[0].second, value) == expected);
    }
}

TEST_CASE("counter game generator", "[pipelines]") {
    FormulaStore store(counter_partition(2));
    Problem problem = gen_counter_game(store, {2, 3});
    REQUIRE(top_conjunct_count(store, problem.env_spec) == 3);

    REQUIRE_THROWS_AS((CounterGameSpec{0, 1}.check()), std::out_of_range);
    REQUIRE_THROWS_AS((CounterGameSpec{1, 11}.check()), std::out_of_range);

    FormulaStore wrong(Partition({"add"}, {"grant"}));
    REQUIRE_THROWS_AS(gen_counter_game(wrong, {2, 1}), std::invalid_argument);
}

TEST_CASE("json record shape", "[pipelines]") {
    SynthesisResult result = run_counter(3, 1, 1);
    nlohmann::json record = result_to_json(result);
    REQUIRE(record["algorithm"] == "3");
    REQUIRE(record["verdict"] == "realizable");
    REQUIRE(record["state_vars"].is_number());
    REQUIRE(record["iterations_adversarial"].is_number());
    REQUIRE(record["iterations_cooperative"].is_number());
    REQUIRE(record["timings_by_stage_ms"]["total"].is_number());
}
