#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "besynth/bdd.hpp"
#include "besynth/explicit_dfa.hpp"

namespace besynth {

/// BDD variables standing for the alphabet propositions, aligned with the
/// partition's proposition order (environment block first, then agent).
struct AlphabetVars {
    std::vector<std::uint32_t> env_vars;
    std::vector<std::uint32_t> agent_vars;

    static AlphabetVars create(DdManager& mgr, const Partition& partition) {
        AlphabetVars vars;
        for (std::size_t i = 0; i < partition.env_count(); ++i)
            vars.env_vars.push_back(mgr.new_var());
        for (std::size_t i = 0; i < partition.agent_count(); ++i)
            vars.agent_vars.push_back(mgr.new_var());
        return vars;
    }

    std::uint32_t var_of_prop(const Partition& partition, std::size_t prop) const {
        return partition.is_env(prop) ? env_vars[prop]
                                      : agent_vars[prop - env_vars.size()];
    }

    Bdd letter_cube(DdManager& mgr, const Partition& partition, Letter letter) const {
        Bdd cube = mgr.bdd_true();
        for (std::size_t i = 0; i < partition.prop_count(); ++i) {
            std::uint32_t v = var_of_prop(partition, i);
            cube = cube & (((letter >> i) & 1u) ? mgr.var(v) : mgr.nvar(v));
        }
        return cube;
    }
};

/// Whether encode() keeps the all-false codeword free. The plain encoding is
/// the minimal one (state i -> binary(i), |Z| = ceil(log2 |S|)); the
/// reserving encoding shifts codewords by one so the all-false assignment
/// never denotes a real state and stays a genuine trap under restriction.
enum class SinkPolicy { plain, reserve };

inline std::size_t state_var_count(std::uint32_t state_count, SinkPolicy policy) {
    std::uint64_t needed = state_count;
    if (policy == SinkPolicy::reserve) needed += 1;
    std::size_t bits = 0;
    while ((std::uint64_t{1} << bits) < needed) ++bits;
    return bits;
}

/// Log-encoded deterministic transition system with a final-state predicate:
/// state variables Z, initial assignment Z0, one next-state function per
/// state bit (each over X u Y u Z), and the final predicate over Z.
struct SymbolicDfa {
    Partition partition;
    DdManager* mgr = nullptr;
    AlphabetVars alphabet;
    std::vector<std::uint32_t> state_vars;  // least significant bit first
    std::vector<bool> initial;              // aligned with state_vars
    std::vector<Bdd> eta;                   // aligned with state_vars
    Bdd final_fn;
    std::uint32_t state_count = 0;
    std::uint32_t code_offset = 0;  // codeword = state index + offset

    std::uint64_t codeword(std::uint32_t state) const { return state + code_offset; }

    Bdd state_cube(std::uint32_t state) const {
        Bdd cube = mgr->bdd_true();
        std::uint64_t code = codeword(state);
        for (std::size_t i = 0; i < state_vars.size(); ++i)
            cube = cube & (((code >> i) & 1u) ? mgr->var(state_vars[i])
                                              : mgr->nvar(state_vars[i]));
        return cube;
    }

    /// Assignment of the state variables for a state index.
    std::vector<bool> state_assignment(std::uint32_t state) const {
        std::vector<bool> bits(state_vars.size());
        std::uint64_t code = codeword(state);
        for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (code >> i) & 1u;
        return bits;
    }

    /// Inverse of the encoding; kNoState for the sink or unused codewords.
    static constexpr std::uint32_t kNoState = UINT32_MAX;
    std::uint32_t decode(const std::vector<bool>& assignment) const {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i]) code |= std::uint64_t{1} << i;
        if (code < code_offset || code - code_offset >= state_count) return kNoState;
        return static_cast<std::uint32_t>(code - code_offset);
    }
};

/// Symbolic encoding of an explicit DFA. Real states map bijectively onto
/// codewords; every unused codeword steps to the all-false codeword, and the
/// final predicate holds exactly on the codewords of final states.
inline SymbolicDfa encode(DdManager& mgr, const ExplicitDfa& dfa,
                          const AlphabetVars& alphabet,
                          SinkPolicy policy = SinkPolicy::plain,
                          std::vector<std::uint32_t> state_vars = {}) {
    SymbolicDfa sym;
    sym.partition = dfa.partition;
    sym.mgr = &mgr;
    sym.alphabet = alphabet;
    sym.state_count = dfa.state_count;
    sym.code_offset = policy == SinkPolicy::reserve ? 1 : 0;

    std::size_t bits = state_var_count(dfa.state_count, policy);
    if (state_vars.empty())
        for (std::size_t i = 0; i < bits; ++i) state_vars.push_back(mgr.new_var());
    else if (state_vars.size() != bits)
        throw std::invalid_argument("encode: wrong number of state variables");
    sym.state_vars = std::move(state_vars);
    sym.initial = sym.state_assignment(dfa.initial);

    const std::size_t letters = dfa.letter_count();
    std::vector<Bdd> letter_cubes;
    letter_cubes.reserve(letters);
    for (Letter letter = 0; letter < letters; ++letter)
        letter_cubes.push_back(alphabet.letter_cube(mgr, dfa.partition, letter));

    sym.eta.assign(sym.state_vars.size(), mgr.bdd_false());
    for (std::uint32_t s = 0; s < dfa.state_count; ++s) {
        Bdd source = sym.state_cube(s);
        for (Letter letter = 0; letter < letters; ++letter) {
            std::uint64_t target = sym.codeword(dfa.next(s, letter));
            if (target == 0) continue;
            Bdd edge = source & letter_cubes[letter];
            for (std::size_t i = 0; i < sym.state_vars.size(); ++i)
                if ((target >> i) & 1u) sym.eta[i] = sym.eta[i] | edge;
        }
    }

    sym.final_fn = mgr.bdd_false();
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        if (dfa.finals[s]) sym.final_fn = sym.final_fn | sym.state_cube(s);
    return sym;
}

/// Next assignment of a symbolic DFA under a state assignment and a letter.
inline std::vector<bool> sym_successor(const SymbolicDfa& d,
                                       const std::vector<bool>& state, Letter letter) {
    std::unordered_map<std::uint32_t, bool> values;
    for (std::size_t i = 0; i < d.state_vars.size(); ++i) values[d.state_vars[i]] = state[i];
    for (std::size_t i = 0; i < d.partition.prop_count(); ++i)
        values[d.alphabet.var_of_prop(d.partition, i)] = (letter >> i) & 1u;
    auto lookup = [&](std::uint32_t v) {
        auto it = values.find(v);
        return it != values.end() && it->second;
    };
    std::vector<bool> next(d.state_vars.size());
    for (std::size_t i = 0; i < d.state_vars.size(); ++i)
        next[i] = d.mgr->eval(d.eta[i], lookup);
    return next;
}

inline bool sym_accepts(const SymbolicDfa& d, const Trace& word) {
    if (word.empty()) throw std::invalid_argument("sym_accepts: empty word");
    std::vector<bool> state = d.initial;
    for (Letter letter : word) state = sym_successor(d, state, letter);
    std::unordered_map<std::uint32_t, bool> values;
    for (std::size_t i = 0; i < d.state_vars.size(); ++i) values[d.state_vars[i]] = state[i];
    return d.mgr->eval(d.final_fn, [&](std::uint32_t v) {
        auto it = values.find(v);
        return it != values.end() && it->second;
    });
}

/// Shared game arena: a product transition system carrying one final
/// predicate per component, all over the union of the component state
/// variables.
struct SymbolicArena {
    Partition partition;
    DdManager* mgr = nullptr;
    AlphabetVars alphabet;
    std::vector<std::uint32_t> state_vars;
    std::vector<bool> initial;
    std::vector<Bdd> eta;
    std::vector<Bdd> component_finals;

    /// Variable-value functor for a state-variable assignment; variables
    /// outside the arena's state family read false.
    auto state_lookup(const std::vector<bool>& assignment) const {
        std::unordered_map<std::uint32_t, bool> values;
        for (std::size_t i = 0; i < state_vars.size(); ++i)
            values.emplace(state_vars[i], assignment[i]);
        return [values = std::move(values)](std::uint32_t v) {
            auto it = values.find(v);
            return it != values.end() && it->second;
        };
    }

    auto initial_lookup() const { return state_lookup(initial); }

    /// Cube identifying exactly the initial assignment.
    Bdd initial_cube() const {
        Bdd cube = mgr->bdd_true();
        for (std::size_t i = 0; i < state_vars.size(); ++i)
            cube = cube & (initial[i] ? mgr->var(state_vars[i]) : mgr->nvar(state_vars[i]));
        return cube;
    }
};

/// Synchronized product: union of the (disjoint) state-variable families,
/// concatenated initial assignment, and the component final predicates
/// carried alongside.
inline SymbolicArena sym_product(const std::vector<const SymbolicDfa*>& components) {
    if (components.empty()) throw std::invalid_argument("sym_product: no components");
    SymbolicArena arena;
    arena.partition = components[0]->partition;
    arena.mgr = components[0]->mgr;
    arena.alphabet = components[0]->alphabet;
    for (const SymbolicDfa* d : components) {
        if (d->mgr != arena.mgr)
            throw std::invalid_argument("sym_product: components from different managers");
        if (!(d->partition == arena.partition))
            throw std::invalid_argument("sym_product: partitions differ");
        arena.state_vars.insert(arena.state_vars.end(), d->state_vars.begin(),
                                d->state_vars.end());
        arena.initial.insert(arena.initial.end(), d->initial.begin(), d->initial.end());
        arena.eta.insert(arena.eta.end(), d->eta.begin(), d->eta.end());
        arena.component_finals.push_back(d->final_fn);
    }
    return arena;
}

inline SymbolicArena as_arena(const SymbolicDfa& d) {
    return sym_product({&d});
}

/// Restriction to a state predicate g over Z: eta' = eta & g componentwise,
/// so every transition from a state outside g leads to the all-false
/// assignment. Final predicates are conjoined with g so that neither the
/// sink nor excluded states count as accepting.
inline SymbolicArena restrict_arena(const SymbolicArena& arena, const Bdd& g) {
    SymbolicArena out = arena;
    for (Bdd& bit : out.eta) bit = bit & g;
    for (Bdd& f : out.component_finals) f = f & g;
    return out;
}

inline SymbolicDfa restrict_dfa(const SymbolicDfa& d, const Bdd& g) {
    SymbolicDfa out = d;
    for (Bdd& bit : out.eta) bit = bit & g;
    out.final_fn = out.final_fn & g;
    return out;
}

/// The three objective predicates for the best-effort games.
struct LiftedObjectives {
    Bdd env_implies_goal;  // f_E -> f_phi
    Bdd not_env;           // !f_E
    Bdd env_and_goal;      // f_E & f_phi
};

inline LiftedObjectives lift_finals(const Bdd& env_final, const Bdd& goal_final) {
    return {env_final.implies(goal_final), !env_final, env_final & goal_final};
}

/// Stable textual form of a predicate as a disjunction of cubes, for the
/// diagnostic dump.
inline std::string bdd_expr_string(DdManager& mgr, const Bdd& f,
                                   const std::vector<std::string>& var_names) {
    if (f.is_false()) return "false";
    if (f.is_true()) return "true";
    std::ostringstream out;
    bool first_cube = true;
    std::vector<std::pair<Bdd, std::string>> stack{{f, ""}};
    while (!stack.empty()) {
        auto [node, path] = stack.back();
        stack.pop_back();
        if (node.is_false()) continue;
        if (node.is_true()) {
            out << (first_cube ? "" : " | ") << '(' << path << ')';
            first_cube = false;
            continue;
        }
        std::uint32_t v = mgr.top_var(node);
        std::string name = v < var_names.size() && !var_names[v].empty()
                               ? var_names[v]
                               : "v" + std::to_string(v);
        std::string sep = path.empty() ? "" : " & ";
        // Low branch pushed first so the high branch pops first: cube order
        // follows the variable order, most-constrained-true first.
        stack.emplace_back(mgr.low(node), path + sep + "!" + name);
        stack.emplace_back(mgr.high(node), path + sep + name);
    }
    return out.str();
}

/// Variable-name table for diagnostics: state bits as z0, z1, ... per
/// component order, propositions by their partition names.
inline std::vector<std::string> arena_var_names(const SymbolicArena& arena) {
    std::vector<std::string> names(arena.mgr->var_count());
    for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
        names[arena.state_vars[i]] = "z" + std::to_string(i);
    for (std::size_t i = 0; i < arena.partition.prop_count(); ++i)
        names[arena.alphabet.var_of_prop(arena.partition, i)] = arena.partition.name(i);
    return names;
}

inline std::string dump_symbolic(const SymbolicDfa& d) {
    SymbolicArena arena = as_arena(d);
    std::vector<std::string> names = arena_var_names(arena);
    std::ostringstream out;
    for (std::size_t i = 0; i < d.eta.size(); ++i)
        out << "eta z" << i << " = " << bdd_expr_string(*d.mgr, d.eta[i], names) << '\n';
    out << "final = " << bdd_expr_string(*d.mgr, d.final_fn, names) << '\n';
    return out.str();
}

}  // namespace besynth
