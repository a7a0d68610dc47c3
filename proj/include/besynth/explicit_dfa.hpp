#pragma once

#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "besynth/errors.hpp"
#include "besynth/partition.hpp"
#include "besynth/semantics.hpp"

namespace besynth {

/// Hard cap on propositions for letter-indexed transition tables; the
/// alphabet is exponential in the proposition count.
inline constexpr std::size_t kMaxExplicitProps = 16;

/// Complete deterministic finite automaton over the partitioned alphabet
/// 2^(X u Y). States are dense indices; the transition table is total and
/// letter-indexed (state-major).
struct ExplicitDfa {
    Partition partition;
    std::uint32_t state_count = 0;
    std::uint32_t initial = 0;
    std::vector<std::uint32_t> delta;  // delta[s * letter_count + letter]
    std::vector<bool> finals;

    std::size_t letter_count() const { return std::size_t{1} << partition.prop_count(); }

    std::uint32_t next(std::uint32_t state, Letter letter) const {
        return delta[static_cast<std::size_t>(state) * letter_count() + letter];
    }

    bool is_final(std::uint32_t state) const { return finals[state]; }

    void check_well_formed() const {
        if (partition.prop_count() > kMaxExplicitProps)
            throw ResourceLimitError("explicit DFA: too many propositions");
        if (initial >= state_count) throw std::invalid_argument("initial state out of range");
        if (delta.size() != static_cast<std::size_t>(state_count) * letter_count())
            throw std::invalid_argument("transition table has wrong size");
        if (finals.size() != state_count) throw std::invalid_argument("finals has wrong size");
        for (std::uint32_t t : delta)
            if (t >= state_count) throw std::invalid_argument("transition target out of range");
    }
};

/// The run induced by a word: |word| + 1 states starting at the initial one.
inline std::vector<std::uint32_t> run(const ExplicitDfa& dfa, const Trace& word) {
    std::vector<std::uint32_t> states;
    states.reserve(word.size() + 1);
    std::uint32_t s = dfa.initial;
    states.push_back(s);
    for (Letter letter : word) {
        s = dfa.next(s, letter);
        states.push_back(s);
    }
    return states;
}

/// Membership: the last state of the run is final. Words must be nonempty.
inline bool accepts(const ExplicitDfa& dfa, const Trace& word) {
    if (word.empty()) throw std::invalid_argument("accepts: empty word");
    std::uint32_t s = dfa.initial;
    for (Letter letter : word) s = dfa.next(s, letter);
    return dfa.finals[s];
}

/// A cube over the alphabet: `value` gives the polarity of every proposition
/// whose bit is set in `mask`; the rest are don't-cares.
struct LetterCube {
    Letter mask = 0;
    Letter value = 0;
};

inline std::string cube_to_string(const Partition& partition, const LetterCube& cube) {
    if (cube.mask == 0) return "true";
    std::string out;
    for (std::size_t i = 0; i < partition.prop_count(); ++i) {
        if (!((cube.mask >> i) & 1u)) continue;
        if (!out.empty()) out += " & ";
        if (!((cube.value >> i) & 1u)) out += '!';
        out += partition.name(i);
    }
    return out;
}

namespace detail {

inline void cover_rec(const std::vector<bool>& present, std::size_t prop_count,
                      std::size_t next_prop, Letter mask, Letter value,
                      std::vector<LetterCube>& out) {
    bool all = true, none = true;
    const Letter count = Letter{1} << prop_count;
    for (Letter letter = 0; letter < count; ++letter) {
        if ((letter & mask) != value) continue;
        if (present[letter]) none = false;
        else all = false;
        if (!all && !none) break;
    }
    if (none) return;
    if (all) {
        out.push_back({mask, value});
        return;
    }
    Letter bit = Letter{1} << next_prop;
    cover_rec(present, prop_count, next_prop + 1, mask | bit, value, out);
    cover_rec(present, prop_count, next_prop + 1, mask | bit, value | bit, out);
}

}  // namespace detail

/// Covers a letter set with order-aligned cubes (deterministic, exact).
inline std::vector<LetterCube> cover_letters(std::size_t prop_count,
                                             const std::vector<bool>& present) {
    std::vector<LetterCube> cubes;
    detail::cover_rec(present, prop_count, 0, 0, 0, cubes);
    return cubes;
}

/// Per-edge cube list between a pair of states, used by the dump formats.
inline std::vector<std::pair<std::uint32_t, LetterCube>> outgoing_cubes(
    const ExplicitDfa& dfa, std::uint32_t state) {
    std::vector<std::pair<std::uint32_t, LetterCube>> edges;
    const std::size_t letters = dfa.letter_count();
    std::vector<bool> seen(dfa.state_count, false);
    std::vector<std::uint32_t> targets;
    for (Letter letter = 0; letter < letters; ++letter) {
        std::uint32_t t = dfa.next(state, letter);
        if (!seen[t]) {
            seen[t] = true;
            targets.push_back(t);
        }
    }
    std::vector<bool> present(letters);
    for (std::uint32_t t : targets) {
        present.assign(letters, false);
        for (Letter letter = 0; letter < letters; ++letter)
            if (dfa.next(state, letter) == t) present[letter] = true;
        for (const LetterCube& cube :
             cover_letters(dfa.partition.prop_count(), present))
            edges.emplace_back(t, cube);
    }
    return edges;
}

/// Line-based text dump: `dfa v1`, `states N`, `initial i`, `finals ...`,
/// then one `trans src "cube" dst` line per cube edge.
inline std::string to_text(const ExplicitDfa& dfa) {
    std::ostringstream out;
    out << "dfa v1\n";
    out << "states " << dfa.state_count << '\n';
    out << "initial " << dfa.initial << '\n';
    out << "finals";
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        if (dfa.finals[s]) out << ' ' << s;
    out << '\n';
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        for (const auto& [target, cube] : outgoing_cubes(dfa, s))
            out << "trans " << s << " \"" << cube_to_string(dfa.partition, cube)
                << "\" " << target << '\n';
    return out.str();
}

/// Graphviz dump; final states are double-circled.
inline std::string to_dot(const ExplicitDfa& dfa) {
    std::ostringstream out;
    out << "digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n";
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        out << "  s" << s << " [shape=" << (dfa.finals[s] ? "doublecircle" : "circle")
            << "];\n";
    out << "  init -> s" << dfa.initial << ";\n";
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        for (const auto& [target, cube] : outgoing_cubes(dfa, s))
            out << "  s" << s << " -> s" << target << " [label=\""
                << cube_to_string(dfa.partition, cube) << "\"];\n";
    out << "}\n";
    return out.str();
}

}  // namespace besynth
