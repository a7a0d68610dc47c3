#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "besynth/dfa_ops.hpp"
#include "besynth/transducer.hpp"
#include "besynth/translate.hpp"

namespace besynth {

/// Black-box agent under validation: emits its output for the current step,
/// then consumes the environment's input. Implementations must be
/// deterministic and expose a state key for cycle detection.
class AgentSimulator {
public:
    virtual ~AgentSimulator() = default;
    virtual void reset() = 0;
    virtual Letter output() = 0;  // agent bits already shifted into place
    virtual void advance(Letter env_bits) = 0;
    virtual std::uint64_t state_key() const = 0;
};

/// Adapter running a synthesized strategy through its transducer.
class StrategyAgent : public AgentSimulator {
public:
    explicit StrategyAgent(const SynthesisResult& result) : transducer_(result) {}
    void reset() override { transducer_.reset(); }
    Letter output() override { return transducer_.pending_output(); }
    void advance(Letter env_bits) override { transducer_.step(env_bits); }
    std::uint64_t state_key() const override { return transducer_.state_key(); }

private:
    Transducer transducer_;
};

struct ValidationBounds {
    std::uint32_t max_states = 8;   // minimized product arena states
    std::size_t max_env_props = 2;  // environment propositions
    std::uint64_t max_env_strategies = 4096;
    std::uint64_t search_node_budget = 50'000'000;
};

/// Outcome of the positional-dominance check. Both quantifiers of the
/// dominance definition are restricted to make the check finite: candidate
/// agent strategies are positional maps on the minimized product arena,
/// explored exhaustively on their reachable domains; environment strategies
/// are positional maps over the environment-objective quotient, observing
/// the play only through the specification's progress. The restriction is
/// recorded in `strategy_class`.
struct ValidationReport {
    bool ran = false;
    std::string skipped_reason;
    std::string strategy_class =
        "positional agent strategies on the minimized product arena vs. "
        "positional environment strategies over the environment-objective "
        "quotient";

    std::size_t arena_states = 0;
    std::uint64_t env_strategy_count = 0;
    std::uint64_t enforcing_count = 0;
    std::uint64_t agent_wins = 0;  // enforcing strategies the agent beats

    bool dominated = false;
    bool search_complete = true;  // false if the node budget ran out
    std::vector<Letter> dominating_strategy;  // per-state agent letters, if found
};

namespace detail {

struct ValidationArena {
    Partition partition;
    std::uint32_t state_count = 0;
    std::uint32_t initial = 0;
    std::vector<std::uint32_t> delta;  // state-major over full letters
    std::vector<bool> env_final;       // prefix satisfies E
    std::vector<bool> goal_final;      // prefix satisfies phi
    std::vector<std::uint32_t> env_obs;  // state -> environment observation class
    std::uint32_t env_obs_count = 0;
    std::size_t env_count = 0;
    Letter env_letters = 1;
    Letter agent_letters = 1;

    std::uint32_t next(std::uint32_t state, Letter x, Letter y) const {
        Letter letter = x | (y << env_count);
        return delta[static_cast<std::size_t>(state) *
                         (static_cast<std::size_t>(env_letters) * agent_letters) +
                     letter];
    }

    Letter env_choice(const std::vector<Letter>& tau, std::uint32_t state) const {
        return tau[env_obs[state]];
    }
};

/// Moore-style signature refinement: classes start from `labels` and split
/// until transition-consistent.
template <typename NextFn>
inline std::pair<std::vector<std::uint32_t>, std::uint32_t> refine_classes(
    std::uint32_t n, std::size_t letters, NextFn&& next,
    std::vector<std::uint32_t> cls, std::uint32_t class_count) {
    while (true) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> signature_class;
        std::vector<std::uint32_t> next_cls(n);
        for (std::uint32_t s = 0; s < n; ++s) {
            std::vector<std::uint32_t> signature{cls[s]};
            for (Letter a = 0; a < letters; ++a)
                signature.push_back(cls[next(s, a)]);
            auto [it, inserted] = signature_class.try_emplace(
                std::move(signature), static_cast<std::uint32_t>(signature_class.size()));
            next_cls[s] = it->second;
        }
        bool stable = signature_class.size() == class_count;
        class_count = static_cast<std::uint32_t>(signature_class.size());
        cls = std::move(next_cls);
        if (stable) break;
    }
    return {std::move(cls), class_count};
}

/// Bisimulation quotient of the product arena with respect to the pair of
/// objective predicates. Strategies on the quotient are exactly the
/// strategies on the product that agree across behaviorally identical
/// states. The environment-observation map is the coarser quotient with
/// respect to the environment predicate alone.
inline ValidationArena quotient_arena(const ExplicitProduct& product) {
    const std::size_t letters = std::size_t{1} << product.partition.prop_count();
    const std::uint32_t n = product.state_count;

    std::vector<std::uint32_t> initial_cls(n);
    for (std::uint32_t s = 0; s < n; ++s)
        initial_cls[s] = (product.lifted_finals[0][s] ? 1u : 0u) |
                         (product.lifted_finals[1][s] ? 2u : 0u);
    auto [cls, class_count] = refine_classes(
        n, letters, [&](std::uint32_t s, Letter a) { return product.next(s, a); },
        std::move(initial_cls), 4);

    // Renumber classes in BFS order from the initial one.
    std::vector<std::uint32_t> repr(class_count, UINT32_MAX);
    for (std::uint32_t s = 0; s < n; ++s)
        if (repr[cls[s]] == UINT32_MAX) repr[cls[s]] = s;
    std::vector<std::uint32_t> order(class_count, UINT32_MAX);
    std::vector<std::uint32_t> bfs{cls[product.initial]};
    order[cls[product.initial]] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        for (Letter a = 0; a < letters; ++a) {
            std::uint32_t c = cls[product.next(repr[bfs[i]], a)];
            if (order[c] == UINT32_MAX) {
                order[c] = static_cast<std::uint32_t>(bfs.size());
                bfs.push_back(c);
            }
        }
    }

    ValidationArena arena;
    arena.partition = product.partition;
    arena.state_count = static_cast<std::uint32_t>(bfs.size());
    arena.initial = 0;
    arena.env_count = product.partition.env_count();
    arena.env_letters = Letter{1} << arena.env_count;
    arena.agent_letters = Letter{1} << product.partition.agent_count();
    arena.delta.resize(static_cast<std::size_t>(arena.state_count) * letters);
    arena.env_final.resize(arena.state_count);
    arena.goal_final.resize(arena.state_count);
    for (std::uint32_t i = 0; i < bfs.size(); ++i) {
        std::uint32_t s = repr[bfs[i]];
        arena.env_final[i] = product.lifted_finals[0][s];
        arena.goal_final[i] = product.lifted_finals[1][s];
        for (Letter a = 0; a < letters; ++a)
            arena.delta[static_cast<std::size_t>(i) * letters + a] =
                order[cls[product.next(s, a)]];
    }

    std::vector<std::uint32_t> obs_seed(arena.state_count);
    for (std::uint32_t s = 0; s < arena.state_count; ++s)
        obs_seed[s] = arena.env_final[s] ? 1u : 0u;
    auto [obs, obs_count] = refine_classes(
        arena.state_count, letters,
        [&](std::uint32_t s, Letter a) {
            return arena.delta[static_cast<std::size_t>(s) * letters + a];
        },
        std::move(obs_seed), 2);
    arena.env_obs = std::move(obs);
    arena.env_obs_count = obs_count;
    return arena;
}

inline ValidationArena build_validation_arena(const Problem& problem,
                                              const TranslateOptions& options = {}) {
    FormulaStore& store = *problem.store;
    ExplicitDfa a_env = with_fresh_initial(translate(store, problem.env_spec, options));
    ExplicitDfa a_goal = with_fresh_initial(translate(store, problem.goal, options));
    ExplicitProduct product = product_ts({&a_env, &a_goal});
    return quotient_arena(product);
}

/// tau enforces E iff every state reachable in one or more steps, whatever
/// the agent outputs, satisfies the E predicate (all-prefix semantics).
inline bool env_strategy_enforces(const ValidationArena& arena,
                                  const std::vector<Letter>& tau) {
    std::vector<bool> seen(arena.state_count, false);
    std::vector<std::uint32_t> stack;
    auto visit = [&](std::uint32_t s) {
        if (!arena.env_final[s]) return false;
        if (!seen[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
        return true;
    };
    for (Letter y = 0; y < arena.agent_letters; ++y)
        if (!visit(arena.next(arena.initial, arena.env_choice(tau, arena.initial), y)))
            return false;
    while (!stack.empty()) {
        std::uint32_t s = stack.back();
        stack.pop_back();
        for (Letter y = 0; y < arena.agent_letters; ++y)
            if (!visit(arena.next(s, arena.env_choice(tau, s), y))) return false;
    }
    return true;
}

/// Whether the black-box agent's play against tau satisfies the goal. The
/// joint evolution is deterministic, so the play is periodic in the pair
/// (arena state, agent state); any prefix reaching a goal-final state wins.
inline bool agent_beats(const ValidationArena& arena, const std::vector<Letter>& tau,
                        AgentSimulator& agent) {
    agent.reset();
    std::uint32_t s = arena.initial;
    std::set<std::pair<std::uint64_t, std::uint32_t>> visited;
    while (true) {
        if (!visited.emplace(agent.state_key(), s).second) return false;
        Letter x = arena.env_choice(tau, s);
        Letter y = agent.output() >> arena.env_count;
        agent.advance(x);
        s = arena.next(s, x, y);
        if (arena.goal_final[s]) return true;
    }
}

/// Exhaustive search for a positional agent strategy that wins against every
/// environment strategy in `required` and at least one in `targets`. The
/// partial strategy extends at first-visit states and backtracks
/// chronologically, so the search covers every reachable-domain positional
/// map. Plays are simulated environment by environment; a play that closes a
/// cycle without reaching the goal fails.
class DominatorSearch {
public:
    DominatorSearch(const ValidationArena& arena,
                    const std::vector<std::vector<Letter>>& required,
                    const std::vector<std::vector<Letter>>& targets,
                    std::uint64_t budget)
        : arena_(arena),
          required_(required),
          targets_(targets),
          assigned_(arena.state_count, kUnset),
          budget_(budget) {}

    bool found(std::vector<Letter>* witness) {
        bool ok = solve_required(0);
        if (ok && witness) *witness = assigned_;
        return ok;
    }

    bool budget_exhausted() const { return budget_ == 0; }

private:
    static constexpr Letter kUnset = UINT32_MAX;

    bool solve_required(std::size_t index) {
        if (index == required_.size()) return win_some_target();
        std::vector<std::uint32_t> path{arena_.initial};
        return play(required_[index], path,
                    [&] { return solve_required(index + 1); });
    }

    bool win_some_target() {
        for (const std::vector<Letter>& target : targets_) {
            std::vector<std::uint32_t> path{arena_.initial};
            if (play(target, path, [] { return true; })) return true;
            if (budget_ == 0) return false;
        }
        return false;
    }

    template <typename Continue>
    bool play(const std::vector<Letter>& tau, std::vector<std::uint32_t>& path,
              Continue&& next_goal) {
        if (budget_ == 0) return false;
        --budget_;
        std::uint32_t s = path.back();
        if (assigned_[s] != kUnset)
            return advance(tau, path, assigned_[s], next_goal);
        for (Letter y = 0; y < arena_.agent_letters; ++y) {
            assigned_[s] = y;
            if (advance(tau, path, y, next_goal)) return true;
            assigned_[s] = kUnset;
            if (budget_ == 0) return false;
        }
        return false;
    }

    template <typename Continue>
    bool advance(const std::vector<Letter>& tau, std::vector<std::uint32_t>& path,
                 Letter y, Continue&& next_goal) {
        std::uint32_t s = path.back();
        std::uint32_t t = arena_.next(s, arena_.env_choice(tau, s), y);
        if (arena_.goal_final[t]) return next_goal();
        for (std::uint32_t q : path)
            if (q == t) return false;  // cycle without reaching the goal
        path.push_back(t);
        bool ok = play(tau, path, next_goal);
        path.pop_back();
        return ok;
    }

    const ValidationArena& arena_;
    const std::vector<std::vector<Letter>>& required_;
    const std::vector<std::vector<Letter>>& targets_;
    std::vector<Letter> assigned_;
    std::uint64_t budget_;
};

}  // namespace detail

/// Brute-force best-effort check of an agent on the explicit product arena:
/// enumerates the environment strategies enforcing E, records which of them
/// the agent beats, and searches exhaustively for a positional strategy
/// beating a strict superset. Within bounds this decides strict dominance in
/// the stated strategy classes; outside them validation is skipped and
/// reported as such.
inline ValidationReport validate(const Problem& problem, AgentSimulator& agent,
                                 const ValidationBounds& bounds = {}) {
    problem.check();
    ValidationReport report;
    detail::ValidationArena arena = detail::build_validation_arena(problem);
    report.arena_states = arena.state_count;

    if (arena.state_count > bounds.max_states) {
        report.skipped_reason = "product arena exceeds the state bound";
        return report;
    }
    if (arena.env_count > bounds.max_env_props) {
        report.skipped_reason = "too many environment propositions";
        return report;
    }
    double strategies = 1;
    for (std::uint32_t c = 0; c < arena.env_obs_count; ++c) {
        strategies *= static_cast<double>(arena.env_letters);
        if (strategies > static_cast<double>(bounds.max_env_strategies)) {
            report.skipped_reason = "environment strategy space exceeds the budget";
            return report;
        }
    }
    report.ran = true;
    report.env_strategy_count = static_cast<std::uint64_t>(strategies);

    // Enumerate the environment strategies, one letter per observation class.
    std::vector<std::vector<Letter>> beaten;    // enforcing, agent wins
    std::vector<std::vector<Letter>> unbeaten;  // enforcing, agent loses
    std::vector<Letter> tau(arena.env_obs_count, 0);
    while (true) {
        if (detail::env_strategy_enforces(arena, tau)) {
            ++report.enforcing_count;
            if (detail::agent_beats(arena, tau, agent)) {
                ++report.agent_wins;
                beaten.push_back(tau);
            } else {
                unbeaten.push_back(tau);
            }
        }
        std::size_t k = 0;
        while (k < tau.size()) {
            if (++tau[k] < arena.env_letters) break;
            tau[k] = 0;
            ++k;
        }
        if (k == tau.size()) break;
    }

    // A strict dominator beats everything the agent beats plus at least one
    // enforcing strategy the agent loses.
    if (!unbeaten.empty()) {
        detail::DominatorSearch search(arena, beaten, unbeaten,
                                       bounds.search_node_budget);
        report.dominated = search.found(&report.dominating_strategy);
        if (!report.dominated && search.budget_exhausted())
            report.search_complete = false;
    }
    return report;
}

inline ValidationReport validate(const Problem& problem, const SynthesisResult& result,
                                 const ValidationBounds& bounds = {}) {
    StrategyAgent agent(result);
    return validate(problem, agent, bounds);
}

}  // namespace besynth
