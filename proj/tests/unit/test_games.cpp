#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <unordered_map>

#include "besynth/games.hpp"
#include "besynth/parser.hpp"
#include "besynth/translate.hpp"
#include "support/oracles.hpp"

using namespace besynth;

namespace {

struct SymbolicSetup {
    ExplicitDfa dfa;
    DdManager mgr;
    AlphabetVars alphabet;
    SymbolicDfa sym;
    SymbolicArena arena;

    SymbolicSetup(Partition partition, const std::string& formula_text,
                  SinkPolicy policy = SinkPolicy::plain) {
        FormulaStore store(partition);
        dfa = translate(store, parse_formula(store, formula_text));
        alphabet = AlphabetVars::create(mgr, partition);
        sym = encode(mgr, dfa, alphabet, policy);
        arena = as_arena(sym);
    }

    SymbolicSetup(std::mt19937& rng, Partition partition, std::uint32_t states) {
        dfa = test::random_dfa(rng, partition, states);
        alphabet = AlphabetVars::create(mgr, partition);
        sym = encode(mgr, dfa, alphabet);
        arena = as_arena(sym);
    }

    bool region_holds_at(const Bdd& region, std::uint32_t state) {
        std::vector<bool> bits = sym.state_assignment(state);
        std::unordered_map<std::uint32_t, bool> vals;
        for (std::size_t i = 0; i < bits.size(); ++i) vals[sym.state_vars[i]] = bits[i];
        return mgr.eval(region, [&](std::uint32_t v) {
            auto it = vals.find(v);
            return it != vals.end() && it->second;
        });
    }

    std::vector<bool> decode_region(const Bdd& region) {
        std::vector<bool> out(dfa.state_count);
        for (std::uint32_t s = 0; s < dfa.state_count; ++s)
            out[s] = region_holds_at(region, s);
        return out;
    }

    /// Agent half of the letter the strategy emits at a state.
    Letter agent_letter(const PositionalStrategy& strategy, std::uint32_t state) {
        std::vector<bool> bits = sym.state_assignment(state);
        std::unordered_map<std::uint32_t, bool> vals;
        for (std::size_t i = 0; i < bits.size(); ++i) vals[sym.state_vars[i]] = bits[i];
        auto lookup = [&](std::uint32_t v) {
            auto it = vals.find(v);
            return it != vals.end() && it->second;
        };
        auto move = strategy.respond(mgr, lookup);
        Letter y = 0;
        for (std::size_t j = 0; j < move.size(); ++j)
            if (move[j].second) y |= Letter{1} << j;
        return y;
    }

    std::vector<bool> goal_states() const {
        std::vector<bool> goal(dfa.state_count);
        for (std::uint32_t s = 0; s < dfa.state_count; ++s) goal[s] = dfa.finals[s];
        return goal;
    }

    /// tau reaches the goal from every region state within |S| steps
    /// whatever the environment plays (backward induction on the induced
    /// graph).
    bool strategy_forces_goal(const PositionalStrategy& strategy,
                              const std::vector<bool>& region,
                              const std::vector<bool>& goal) {
        const std::size_t env_count = dfa.partition.env_count();
        const std::size_t x_count = std::size_t{1} << env_count;
        std::vector<bool> ok = goal;
        for (std::uint32_t round = 0; round < dfa.state_count; ++round) {
            for (std::uint32_t s = 0; s < dfa.state_count; ++s) {
                if (ok[s]) continue;
                Letter y = agent_letter(strategy, s);
                bool all = true;
                for (Letter x = 0; x < x_count && all; ++x)
                    all = ok[dfa.next(s, x | (y << env_count))];
                if (all) ok[s] = true;
            }
        }
        for (std::uint32_t s = 0; s < dfa.state_count; ++s)
            if (region[s] && !ok[s]) return false;
        return true;
    }

    /// gamma can reach the goal from every region state for some inputs.
    bool strategy_can_reach_goal(const PositionalStrategy& strategy,
                                 const std::vector<bool>& region,
                                 const std::vector<bool>& goal) {
        const std::size_t env_count = dfa.partition.env_count();
        const std::size_t x_count = std::size_t{1} << env_count;
        std::vector<bool> can = goal;
        for (std::uint32_t round = 0; round < dfa.state_count; ++round) {
            for (std::uint32_t s = 0; s < dfa.state_count; ++s) {
                if (can[s]) continue;
                Letter y = agent_letter(strategy, s);
                for (Letter x = 0; x < x_count; ++x)
                    if (can[dfa.next(s, x | (y << env_count))]) {
                        can[s] = true;
                        break;
                    }
            }
        }
        for (std::uint32_t s = 0; s < dfa.state_count; ++s)
            if (region[s] && !can[s]) return false;
        return true;
    }
};

}  // namespace

TEST_CASE("trivial goal is won immediately", "[games]") {
    SymbolicSetup setup(Partition({"a"}, {"b"}), "true");
    GameSolution solution = solve_adversarial(setup.arena, setup.mgr.bdd_true());
    REQUIRE(solution.winning_region.is_true());
    REQUIRE(solution.iterations == 0);
}

TEST_CASE("eventually-a as a game the environment controls", "[games]") {
    // a is an environment variable: the agent cannot force it, so the
    // winning region is exactly the already-final state.
    SymbolicSetup setup(Partition({"a"}, {}), "F a");
    GameSolution adv = solve_adversarial(setup.arena, setup.sym.final_fn);
    REQUIRE(adv.winning_region == setup.sym.final_fn);
    REQUIRE(!setup.region_holds_at(adv.winning_region, setup.dfa.initial));

    // Cooperatively every state wins: the environment can supply a.
    GameSolution coop = solve_cooperative(setup.arena, setup.sym.final_fn);
    REQUIRE(coop.winning_region.is_true());
}

TEST_CASE("eventually-b as a game the agent controls", "[games]") {
    SymbolicSetup setup(Partition({}, {"b"}), "F b");
    GameSolution adv = solve_adversarial(setup.arena, setup.sym.final_fn);
    REQUIRE(adv.winning_region.is_true());
    REQUIRE(adv.iterations == 1);
    // The strategy emits b immediately from the initial state.
    REQUIRE(setup.agent_letter(adv.strategy, setup.dfa.initial) == 1);
}

TEST_CASE("empty goal", "[games]") {
    SymbolicSetup setup(Partition({"a"}, {"b"}), "F a");
    GameSolution coop = solve_cooperative(setup.arena, setup.mgr.bdd_false());
    REQUIRE(coop.winning_region.is_false());
    REQUIRE(coop.iterations == 0);
}

TEST_CASE("environment winning region at the extremes", "[games]") {
    SymbolicSetup setup(Partition({"a"}, {"b"}), "F a");
    REQUIRE(env_winning_region(setup.arena, setup.mgr.bdd_true()).is_false());
    REQUIRE(env_winning_region(setup.arena, setup.mgr.bdd_false()).is_true());
}

TEST_CASE("boolean synthesis", "[games]") {
    DdManager mgr;
    std::uint32_t zi = mgr.new_var();
    std::uint32_t yi = mgr.new_var();
    std::uint32_t y2i = mgr.new_var();
    Bdd z = mgr.var(zi), y = mgr.var(yi), y2 = mgr.var(y2i);

    // Relation t = y: the strategy constantly emits y = true.
    {
        PositionalStrategy s = boolean_synthesis(mgr, y, mgr.bdd_true(), {yi});
        REQUIRE(s.outputs.size() == 1);
        REQUIRE(s.outputs[0].second.is_true());
    }
    // Relation (z -> y) & (!z -> !y): the strategy is y = z.
    {
        Bdd t = z.iff(y);
        PositionalStrategy s =
            boolean_synthesis(mgr, t, mgr.exists(mgr.cube({yi}), t), {yi});
        REQUIRE(s.outputs[0].second == z);
    }
    // Two valid outputs: the returned assignment satisfies the relation.
    {
        Bdd t = y ^ y2;
        PositionalStrategy s = boolean_synthesis(mgr, t, mgr.bdd_true(), {yi, y2i});
        std::vector<bool> chosen(3, false);
        for (const auto& [var, fn] : s.outputs)
            chosen[var] = mgr.eval(fn, [](std::uint32_t) { return false; });
        REQUIRE(mgr.eval(t, chosen));
    }
}

TEST_CASE("symbolic regions match explicit backward induction", "[games][property]") {
    std::mt19937 rng(71);
    for (int round = 0; round < 40; ++round) {
        Partition partition =
            round % 2 ? Partition({"a"}, {"b"}) : Partition({"a", "c"}, {"b"});
        SymbolicSetup setup(rng, partition, 2 + round % 10);

        GameSolution adv = solve_adversarial(setup.arena, setup.sym.final_fn);
        GameSolution coop = solve_cooperative(setup.arena, setup.sym.final_fn);
        REQUIRE(adv.iterations <= static_cast<int>(setup.dfa.state_count));
        REQUIRE(coop.iterations <= static_cast<int>(setup.dfa.state_count));

        // Adversarial region is contained in the cooperative one.
        REQUIRE((adv.winning_region & !coop.winning_region).is_false());

        std::vector<bool> goal = setup.goal_states();
        std::vector<bool> adv_oracle = test::explicit_adversarial_region(setup.dfa, goal);
        std::vector<bool> coop_oracle = test::explicit_cooperative_region(setup.dfa, goal);
        REQUIRE(setup.decode_region(adv.winning_region) == adv_oracle);
        REQUIRE(setup.decode_region(coop.winning_region) == coop_oracle);
    }
}

TEST_CASE("strategies pass play-out soundness", "[games][property]") {
    std::mt19937 rng(73);
    for (int round = 0; round < 25; ++round) {
        SymbolicSetup setup(rng, Partition({"a"}, {"b"}), 2 + round % 8);

        GameSolution adv = solve_adversarial(setup.arena, setup.sym.final_fn);
        GameSolution coop = solve_cooperative(setup.arena, setup.sym.final_fn);

        std::vector<bool> goal = setup.goal_states();
        REQUIRE(setup.strategy_forces_goal(adv.strategy,
                                           setup.decode_region(adv.winning_region), goal));
        REQUIRE(setup.strategy_can_reach_goal(
            coop.strategy, setup.decode_region(coop.winning_region), goal));
    }
}

TEST_CASE("environment region matches strategy enumeration", "[games][property]") {
    // Determinacy guard: the complement of the agent region is exactly the
    // set of states from which some positional environment strategy (a
    // function of state and agent move) keeps the goal unreached forever.
    std::mt19937 rng(79);
    for (int round = 0; round < 6; ++round) {
        std::uint32_t n = 3 + round % 2;  // up to 8 responder slots
        SymbolicSetup setup(rng, Partition({"a"}, {"b"}), n);
        Bdd env_region = env_winning_region(setup.arena, setup.sym.final_fn);

        const std::uint32_t slots = n * 2;  // (state, agent-bit) pairs
        std::vector<bool> env_wins(n, false);
        for (std::uint32_t code = 0; code < (1u << slots); ++code) {
            auto env_choice = [&](std::uint32_t s, Letter y) -> Letter {
                return (code >> (s * 2 + y)) & 1u;
            };
            for (std::uint32_t start = 0; start < n; ++start) {
                if (env_wins[start]) continue;
                // Agent reachability of the goal against this responder.
                std::vector<bool> seen(n, false);
                std::vector<std::uint32_t> stack{start};
                seen[start] = true;
                bool reached = setup.dfa.finals[start];
                while (!stack.empty() && !reached) {
                    std::uint32_t s = stack.back();
                    stack.pop_back();
                    for (Letter y = 0; y < 2 && !reached; ++y) {
                        std::uint32_t t = setup.dfa.next(s, env_choice(s, y) | (y << 1));
                        if (setup.dfa.finals[t]) reached = true;
                        if (!seen[t]) {
                            seen[t] = true;
                            stack.push_back(t);
                        }
                    }
                }
                if (!reached) env_wins[start] = true;
            }
        }

        for (std::uint32_t s = 0; s < n; ++s)
            REQUIRE(setup.region_holds_at(env_region, s) == env_wins[s]);
    }
}

TEST_CASE("strategy truth table dump", "[games]") {
    SymbolicSetup setup(Partition({}, {"b"}), "F b");
    GameSolution adv = solve_adversarial(setup.arena, setup.sym.final_fn);
    std::string table = strategy_truth_table(setup.mgr, adv.strategy,
                                             setup.arena.state_vars);
    // One state variable: two rows, the losing-default row emits b only
    // where the relation demands it.
    REQUIRE(table == "0 -> 1\n1 -> 0\n");

    std::vector<std::uint32_t> too_many(17);
    for (std::uint32_t i = 0; i < 17; ++i) too_many[i] = setup.mgr.new_var();
    REQUIRE_THROWS_AS(strategy_truth_table(setup.mgr, adv.strategy, too_many),
                      std::invalid_argument);
}
