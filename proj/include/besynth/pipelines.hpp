#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "besynth/dfa_ops.hpp"
#include "besynth/games.hpp"
#include "besynth/translate.hpp"

namespace besynth {

/// A best-effort synthesis problem: environment specification E and agent
/// goal phi over a shared partition. E is assumed environment-enforceable;
/// that assumption is diagnosed, not enforced.
struct Problem {
    FormulaStore* store = nullptr;
    FormulaId env_spec = kNoFormula;
    FormulaId goal = kNoFormula;

    void check() const {
        if (!store) throw std::invalid_argument("problem: missing formula store");
        if (store->partition().env_count() == 0 || store->partition().agent_count() == 0)
            throw std::invalid_argument(
                "problem: both environment and agent variables are required");
    }
};

struct StageTimes {
    double translate_ms = 0;
    double product_ms = 0;
    double adversarial_ms = 0;
    double cooperative_ms = 0;
    double extract_ms = 0;
    double total_ms = 0;
};

/// Outcome of one synthesis run. Owns its BDD manager; the arena, regions
/// and strategies all live in it. The manager member precedes every Bdd so
/// handles are released before the manager goes away.
struct SynthesisResult {
    std::shared_ptr<DdManager> mgr;

    std::string algorithm;  // "1", "2", "3", or "reactive"
    bool realizable = false;
    bool env_enforceable = true;

    SymbolicArena arena;          // unrestricted game arena
    LiftedObjectives objectives;  // goal predicates over the arena
    Bdd adversarial_region;       // agent winning region for E -> phi
    Bdd env_region;               // restriction predicate (env region for !E)
    Bdd cooperative_region;

    PositionalStrategy winning_strategy;      // positional, total on the region
    PositionalStrategy cooperative_strategy;  // from the restricted arena
    PositionalStrategy combined_strategy;     // region ? winning : cooperative

    int iterations_adversarial = 0;
    int iterations_cooperative = 0;
    StageTimes times;
    int translation_count = 0;
    std::vector<std::uint32_t> objective_automaton_sizes;
    std::vector<std::size_t> component_state_var_counts;

    std::string verdict() const { return realizable ? "realizable" : "best-effort-only"; }

    std::vector<bool> initial_assignment() const { return arena.initial; }
};

/// Pointwise selection: the winning strategy inside the region, the
/// cooperative one everywhere else.
inline PositionalStrategy combine(DdManager& mgr, const PositionalStrategy& winning,
                                  const PositionalStrategy& cooperative,
                                  const Bdd& region) {
    if (winning.outputs.size() != cooperative.outputs.size())
        throw std::invalid_argument("combine: strategies disagree on outputs");
    PositionalStrategy combined;
    for (std::size_t i = 0; i < winning.outputs.size(); ++i) {
        if (winning.outputs[i].first != cooperative.outputs[i].first)
            throw std::invalid_argument("combine: strategies disagree on outputs");
        combined.outputs.emplace_back(
            winning.outputs[i].first,
            mgr.ite(region, winning.outputs[i].second, cooperative.outputs[i].second));
    }
    return combined;
}

namespace detail {

class StageClock {
public:
    StageClock() : last_(std::chrono::steady_clock::now()), start_(last_) {}

    double lap_ms() {
        auto now = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

    double total_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                         start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point last_;
    std::chrono::steady_clock::time_point start_;
};

/// Steps 3..8 shared by all three pipelines: product arena already built,
/// objectives lifted; play the adversarial game on E -> phi, carve out the
/// environment's region for !E, restrict, play the cooperative game on
/// E & phi, and combine the strategies.
inline void solve_games(SynthesisResult& result, StageClock& clock) {
    DdManager& mgr = *result.mgr;
    const SymbolicArena& arena = result.arena;

    GameSolution adv = solve_adversarial(arena, result.objectives.env_implies_goal,
                                         {.extract_strategy = false});
    GameSolution env = solve_adversarial(arena, result.objectives.not_env,
                                         {.extract_strategy = false});
    result.adversarial_region = adv.winning_region;
    result.env_region = !env.winning_region;
    result.iterations_adversarial = adv.iterations;
    result.times.adversarial_ms = clock.lap_ms();

    SymbolicArena restricted = restrict_arena(arena, result.env_region);
    Bdd coop_goal = result.objectives.env_and_goal & result.env_region;
    GameSolution coop =
        solve_cooperative(restricted, coop_goal, {.extract_strategy = false});
    result.cooperative_region = coop.winning_region;
    result.iterations_cooperative = coop.iterations;
    result.times.cooperative_ms = clock.lap_ms();

    result.winning_strategy = boolean_synthesis(mgr, adv.strategy_relation,
                                                adv.winning_region,
                                                arena.alphabet.agent_vars);
    result.cooperative_strategy = boolean_synthesis(mgr, coop.strategy_relation,
                                                    coop.winning_region,
                                                    arena.alphabet.agent_vars);
    result.combined_strategy = combine(mgr, result.winning_strategy,
                                       result.cooperative_strategy,
                                       result.adversarial_region);
    result.times.extract_ms = clock.lap_ms();

    result.realizable = mgr.eval(result.adversarial_region, result.arena.initial_lookup());
    result.env_enforceable = mgr.eval(result.env_region, result.arena.initial_lookup());
    result.times.total_ms = clock.total_ms();
}

/// Encodes the automata with the sink-reserving policy under the pipeline
/// variable order: all state blocks first, then environment propositions,
/// then agent propositions. Every automaton gets a fresh non-reentrant
/// initial state first, so the arena's initial assignment is identified by
/// its codeword alone and no objective can hold before the first letter.
inline std::vector<SymbolicDfa> encode_all(DdManager& mgr,
                                           const std::vector<const ExplicitDfa*>& automata,
                                           AlphabetVars& alphabet_out) {
    std::vector<ExplicitDfa> prepared;
    prepared.reserve(automata.size());
    for (const ExplicitDfa* dfa : automata) prepared.push_back(with_fresh_initial(*dfa));

    std::vector<std::vector<std::uint32_t>> blocks;
    for (const ExplicitDfa& dfa : prepared) {
        std::vector<std::uint32_t> block;
        for (std::size_t i = 0; i < state_var_count(dfa.state_count, SinkPolicy::reserve);
             ++i)
            block.push_back(mgr.new_var());
        blocks.push_back(std::move(block));
    }
    alphabet_out = AlphabetVars::create(mgr, prepared[0].partition);
    std::vector<SymbolicDfa> encoded;
    for (std::size_t i = 0; i < prepared.size(); ++i)
        encoded.push_back(encode(mgr, prepared[i], alphabet_out, SinkPolicy::reserve,
                                 blocks[i]));
    return encoded;
}

inline std::vector<std::size_t> var_counts(const std::vector<SymbolicDfa>& encoded) {
    std::vector<std::size_t> counts;
    for (const SymbolicDfa& d : encoded) counts.push_back(d.state_vars.size());
    return counts;
}

/// The empty prefix satisfies no formula: falsify every objective at the
/// (never re-entered) initial assignment.
inline LiftedObjectives guard_initial(const SymbolicArena& arena,
                                      const LiftedObjectives& objectives) {
    Bdd not_initial = !arena.initial_cube();
    return {objectives.env_implies_goal & not_initial, objectives.not_env & not_initial,
            objectives.env_and_goal & not_initial};
}

}  // namespace detail

/// Monolithic pipeline: translate E -> phi, !E and E & phi independently
/// (each minimized), encode, product, then the shared game steps.
inline SynthesisResult synth_monolithic(const Problem& problem,
                                        const TranslateOptions& translate_options = {}) {
    problem.check();
    FormulaStore& store = *problem.store;
    detail::StageClock clock;

    SynthesisResult result;
    result.algorithm = "1";
    ExplicitDfa a_imp =
        translate(store, store.implication(problem.env_spec, problem.goal),
                  translate_options);
    ExplicitDfa a_neg = translate(store, store.negation(problem.env_spec),
                                  translate_options);
    ExplicitDfa a_and =
        translate(store, store.conjunction(problem.env_spec, problem.goal),
                  translate_options);
    result.translation_count = 3;
    result.objective_automaton_sizes = {a_imp.state_count, a_neg.state_count,
                                        a_and.state_count};
    result.times.translate_ms = clock.lap_ms();

    result.mgr = std::make_shared<DdManager>();
    AlphabetVars alphabet;
    std::vector<SymbolicDfa> encoded =
        detail::encode_all(*result.mgr, {&a_imp, &a_neg, &a_and}, alphabet);
    result.component_state_var_counts = detail::var_counts(encoded);
    result.arena = sym_product({&encoded[0], &encoded[1], &encoded[2]});
    result.objectives = detail::guard_initial(
        result.arena, {encoded[0].final_fn, encoded[1].final_fn, encoded[2].final_fn});
    result.times.product_ms = clock.lap_ms();

    detail::solve_games(result, clock);
    return result;
}

/// Explicit-compositional pipeline: translate only E and phi, then build the
/// three objective automata with the complement/intersection algebra
/// (minimized at every step); the rest is identical to the monolithic one.
inline SynthesisResult synth_explicit_compositional(
    const Problem& problem, const TranslateOptions& translate_options = {}) {
    problem.check();
    FormulaStore& store = *problem.store;
    detail::StageClock clock;

    SynthesisResult result;
    result.algorithm = "2";
    ExplicitDfa a_env = translate(store, problem.env_spec, translate_options);
    ExplicitDfa a_goal = translate(store, problem.goal, translate_options);
    result.translation_count = 2;
    ExplicitDfa a_imp = complement(intersect(a_env, complement(a_goal)));
    ExplicitDfa a_neg = complement(a_env);
    ExplicitDfa a_and = intersect(a_env, a_goal);
    result.objective_automaton_sizes = {a_imp.state_count, a_neg.state_count,
                                        a_and.state_count};
    result.times.translate_ms = clock.lap_ms();

    result.mgr = std::make_shared<DdManager>();
    AlphabetVars alphabet;
    std::vector<SymbolicDfa> encoded =
        detail::encode_all(*result.mgr, {&a_imp, &a_neg, &a_and}, alphabet);
    result.component_state_var_counts = detail::var_counts(encoded);
    result.arena = sym_product({&encoded[0], &encoded[1], &encoded[2]});
    result.objectives = detail::guard_initial(
        result.arena, {encoded[0].final_fn, encoded[1].final_fn, encoded[2].final_fn});
    result.times.product_ms = clock.lap_ms();

    detail::solve_games(result, clock);
    return result;
}

/// Symbolic-compositional pipeline: translate and encode only E and phi,
/// build one shared product arena (no further minimization), and lift the
/// three objectives from the two final predicates.
inline SynthesisResult synth_symbolic_compositional(
    const Problem& problem, const TranslateOptions& translate_options = {}) {
    problem.check();
    FormulaStore& store = *problem.store;
    detail::StageClock clock;

    SynthesisResult result;
    result.algorithm = "3";
    ExplicitDfa a_env = translate(store, problem.env_spec, translate_options);
    ExplicitDfa a_goal = translate(store, problem.goal, translate_options);
    result.translation_count = 2;
    result.objective_automaton_sizes = {a_env.state_count, a_goal.state_count};
    result.times.translate_ms = clock.lap_ms();

    result.mgr = std::make_shared<DdManager>();
    AlphabetVars alphabet;
    std::vector<SymbolicDfa> encoded =
        detail::encode_all(*result.mgr, {&a_env, &a_goal}, alphabet);
    result.component_state_var_counts = detail::var_counts(encoded);
    result.arena = sym_product({&encoded[0], &encoded[1]});
    result.objectives =
        detail::guard_initial(result.arena,
                              lift_finals(encoded[0].final_fn, encoded[1].final_fn));
    result.times.product_ms = clock.lap_ms();

    detail::solve_games(result, clock);
    return result;
}

/// Plain reactive synthesis baseline: one translation of E -> phi and a
/// single adversarial game. Returns no cooperative fallback; used for
/// overhead comparisons.
inline SynthesisResult synth_reactive(const Problem& problem,
                                      const TranslateOptions& translate_options = {}) {
    problem.check();
    FormulaStore& store = *problem.store;
    detail::StageClock clock;

    SynthesisResult result;
    result.algorithm = "reactive";
    ExplicitDfa a_imp =
        translate(store, store.implication(problem.env_spec, problem.goal),
                  translate_options);
    result.translation_count = 1;
    result.objective_automaton_sizes = {a_imp.state_count};
    result.times.translate_ms = clock.lap_ms();

    result.mgr = std::make_shared<DdManager>();
    AlphabetVars alphabet;
    std::vector<SymbolicDfa> encoded = detail::encode_all(*result.mgr, {&a_imp}, alphabet);
    result.component_state_var_counts = detail::var_counts(encoded);
    result.arena = sym_product({&encoded[0]});
    Bdd goal = encoded[0].final_fn & !result.arena.initial_cube();
    result.objectives = {goal, result.mgr->bdd_false(), goal};
    result.times.product_ms = clock.lap_ms();

    DdManager& mgr = *result.mgr;
    GameSolution adv =
        solve_adversarial(result.arena, goal, {.extract_strategy = false});
    result.adversarial_region = adv.winning_region;
    result.env_region = mgr.bdd_true();
    result.cooperative_region = mgr.bdd_false();
    result.iterations_adversarial = adv.iterations;
    result.times.adversarial_ms = clock.lap_ms();

    result.winning_strategy = boolean_synthesis(mgr, adv.strategy_relation,
                                                adv.winning_region,
                                                result.arena.alphabet.agent_vars);
    result.cooperative_strategy = result.winning_strategy;
    result.combined_strategy = result.winning_strategy;
    result.times.extract_ms = clock.lap_ms();

    result.realizable = mgr.eval(adv.winning_region, result.arena.initial_lookup());
    result.env_enforceable = true;
    result.times.total_ms = clock.total_ms();
    return result;
}

inline SynthesisResult run_algorithm(int algorithm, const Problem& problem,
                                     const TranslateOptions& translate_options = {}) {
    switch (algorithm) {
        case 1: return synth_monolithic(problem, translate_options);
        case 2: return synth_explicit_compositional(problem, translate_options);
        case 3: return synth_symbolic_compositional(problem, translate_options);
        default: throw std::invalid_argument("unknown algorithm id");
    }
}

/// Fixed JSON record for one synthesis run.
inline nlohmann::json result_to_json(const SynthesisResult& result) {
    return nlohmann::json{
        {"algorithm", result.algorithm},
        {"verdict", result.verdict()},
        {"state_vars", result.arena.state_vars.size()},
        {"iterations_adversarial", result.iterations_adversarial},
        {"iterations_cooperative", result.iterations_cooperative},
        {"timings_by_stage_ms",
         {{"translate", result.times.translate_ms},
          {"product", result.times.product_ms},
          {"adversarial", result.times.adversarial_ms},
          {"cooperative", result.times.cooperative_ms},
          {"extract", result.times.extract_ms},
          {"total", result.times.total_ms}}},
    };
}

}  // namespace besynth
