#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "besynth/symbolic_dfa.hpp"

namespace besynth {

/// Uniform positional strategy: one function over the state variables per
/// agent proposition. Off the region the strategy was synthesized for, every
/// output is false.
struct PositionalStrategy {
    std::vector<std::pair<std::uint32_t, Bdd>> outputs;  // (agent BDD var, fn over Z)

    template <typename StateFn>
    std::vector<std::pair<std::uint32_t, bool>> respond(DdManager& mgr,
                                                        StateFn&& state_value) const {
        std::vector<std::pair<std::uint32_t, bool>> move;
        move.reserve(outputs.size());
        for (const auto& [var, fn] : outputs)
            move.emplace_back(var, mgr.eval(fn, state_value));
        return move;
    }
};

struct GameSolution {
    Bdd winning_region;     // over Z
    Bdd strategy_relation;  // over Z u Y
    PositionalStrategy strategy;
    int iterations = 0;  // strict growth rounds of the winning region
};

/// Uniform strategy extraction from a relation t(Z, Y) with projection
/// w = exists Y. t. Outputs are decided in variable order; each takes false
/// unless only true keeps the remainder of the relation satisfiable, so the
/// result is deterministic and pointwise satisfies t on w. Off w the
/// strategy is the all-false assignment.
inline PositionalStrategy boolean_synthesis(DdManager& mgr, const Bdd& relation,
                                            const Bdd& winning,
                                            const std::vector<std::uint32_t>& outputs) {
    PositionalStrategy strategy;
    const std::size_t m = outputs.size();
    if (m == 0) return strategy;

    // proj[i] = exists outputs[i+1..m-1]. relation
    std::vector<Bdd> proj(m);
    proj[m - 1] = relation;
    for (std::size_t i = m - 1; i > 0; --i)
        proj[i - 1] = mgr.exists(mgr.cube({outputs[i]}), proj[i]);

    std::vector<std::pair<std::uint32_t, Bdd>> resolved;
    for (std::size_t i = 0; i < m; ++i) {
        // True exactly where the false branch would leave the remainder
        // unsatisfiable.
        Bdd forced = mgr.cofactor(proj[i], outputs[i], true) &
                     !mgr.cofactor(proj[i], outputs[i], false);
        Bdd fn = resolved.empty() ? forced : mgr.compose(forced, resolved);
        fn = fn & winning;
        resolved.emplace_back(outputs[i], fn);
        strategy.outputs.emplace_back(outputs[i], fn);
    }
    return strategy;
}

struct SolveOptions {
    bool extract_strategy = true;
};

namespace detail {

inline GameSolution solve_reachability(const SymbolicArena& arena, const Bdd& goal,
                                       bool adversarial, const SolveOptions& options) {
    DdManager& mgr = *arena.mgr;
    Bdd x_cube = mgr.cube(arena.alphabet.env_vars);
    Bdd y_cube = mgr.cube(arena.alphabet.agent_vars);
    std::vector<std::pair<std::uint32_t, Bdd>> eta_subst;
    eta_subst.reserve(arena.state_vars.size());
    for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
        eta_subst.emplace_back(arena.state_vars[i], arena.eta[i]);

    GameSolution solution;
    Bdd w = goal;
    Bdd t = goal;
    while (true) {
        Bdd pre = mgr.compose(w, eta_subst);  // w(eta(X, Y, Z)) over Z u X u Y
        Bdd moved = adversarial ? mgr.forall(x_cube, pre) : mgr.exists(x_cube, pre);
        Bdd t_next = t | ((!w) & moved);
        Bdd w_next = mgr.exists(y_cube, t_next);
        if (w_next == w) break;
        w = w_next;
        t = t_next;
        ++solution.iterations;
        mgr.collect_garbage();
    }
    solution.winning_region = w;
    solution.strategy_relation = t;
    if (options.extract_strategy)
        solution.strategy = boolean_synthesis(mgr, t, w, arena.alphabet.agent_vars);
    return solution;
}

}  // namespace detail

/// Least fixpoint of
///   t' = t | (!w & forall X. w(eta(X, Y, Z)))
///   w' = exists Y. t'
/// from w0 = t0 = goal; the positional strategy comes from Boolean synthesis
/// on the final relation. Terminates as w is monotone over a finite lattice.
inline GameSolution solve_adversarial(const SymbolicArena& arena, const Bdd& goal,
                                      const SolveOptions& options = {}) {
    return detail::solve_reachability(arena, goal, /*adversarial=*/true, options);
}

/// Cooperative variant: exists X instead of forall X.
inline GameSolution solve_cooperative(const SymbolicArena& arena, const Bdd& goal,
                                      const SolveOptions& options = {}) {
    return detail::solve_reachability(arena, goal, /*adversarial=*/false, options);
}

/// The environment's winning region, via determinacy of these reachability
/// games: the complement of the agent's adversarial region.
inline Bdd env_winning_region(const SymbolicArena& arena, const Bdd& goal) {
    return !solve_adversarial(arena, goal, {.extract_strategy = false}).winning_region;
}

/// Truth-table dump of a positional strategy: one line per state-variable
/// assignment (low bit first), outputs in the order they were synthesized.
/// Guarded against large state spaces.
inline std::string strategy_truth_table(DdManager& mgr,
                                        const PositionalStrategy& strategy,
                                        const std::vector<std::uint32_t>& state_vars) {
    if (state_vars.size() > 16)
        throw std::invalid_argument("strategy_truth_table: more than 16 state variables");
    std::ostringstream out;
    for (std::uint64_t row = 0; row < (std::uint64_t{1} << state_vars.size()); ++row) {
        std::vector<bool> bits(state_vars.size());
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (row >> i) & 1u;
        for (bool b : bits) out << (b ? '1' : '0');
        out << " ->";
        auto lookup = [&](std::uint32_t v) {
            for (std::size_t i = 0; i < state_vars.size(); ++i)
                if (state_vars[i] == v) return static_cast<bool>(bits[i]);
            return false;
        };
        for (const auto& [var, fn] : strategy.outputs)
            out << ' ' << (mgr.eval(fn, lookup) ? '1' : '0');
        out << '\n';
    }
    return out.str();
}

}  // namespace besynth
