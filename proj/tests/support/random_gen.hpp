#pragma once

#include <random>
#include <vector>

#include "besynth/formula.hpp"
#include "besynth/semantics.hpp"

namespace besynth::test {

/// Random LTLf formula with at most `max_ops` operators over the store's
/// partition. Shapes follow the grammar, including Implies and Not, so the
/// generator exercises NNF and translation on non-normalized input.
inline FormulaId random_formula(FormulaStore& store, std::mt19937& rng, int max_ops) {
    std::uniform_int_distribution<int> leaf_pick(0, 9);
    if (max_ops <= 0) {
        int roll = leaf_pick(rng);
        if (roll == 0) return store.tt();
        if (roll == 1) return store.ff();
        std::uniform_int_distribution<std::uint32_t> atom_pick(
            0, static_cast<std::uint32_t>(store.partition().prop_count() - 1));
        return store.atom(atom_pick(rng));
    }
    std::uniform_int_distribution<int> op_pick(0, 11);
    switch (op_pick(rng)) {
        case 0: return random_formula(store, rng, 0);
        case 1: return store.negation(random_formula(store, rng, max_ops - 1));
        case 2: return store.next(random_formula(store, rng, max_ops - 1));
        case 3: return store.weak_next(random_formula(store, rng, max_ops - 1));
        case 4: return store.eventually(random_formula(store, rng, max_ops - 1));
        case 5: return store.always(random_formula(store, rng, max_ops - 1));
        default: {
            std::uniform_int_distribution<int> split(0, max_ops - 1);
            int left_ops = split(rng);
            FormulaId a = random_formula(store, rng, left_ops);
            FormulaId b = random_formula(store, rng, max_ops - 1 - left_ops);
            switch (op_pick(rng) % 5) {
                case 0: return store.conjunction(a, b);
                case 1: return store.disjunction(a, b);
                case 2: return store.implication(a, b);
                case 3: return store.until(a, b);
                default: return store.release(a, b);
            }
        }
    }
    return store.tt();
}

/// Calls `fn` on every trace of length 1..max_len over `prop_count`
/// propositions. Stops early if fn returns false; returns whether all calls
/// returned true.
template <typename Fn>
inline bool for_each_trace(std::size_t prop_count, std::size_t max_len, Fn&& fn) {
    const Letter letter_count = Letter{1} << prop_count;
    Trace trace;
    // Iterative odometer over traces of each length.
    for (std::size_t len = 1; len <= max_len; ++len) {
        trace.assign(len, 0);
        while (true) {
            if (!fn(const_cast<const Trace&>(trace))) return false;
            std::size_t k = 0;
            while (k < len) {
                if (++trace[k] < letter_count) break;
                trace[k] = 0;
                ++k;
            }
            if (k == len) break;
        }
    }
    return true;
}

inline Trace random_trace(std::mt19937& rng, std::size_t prop_count, std::size_t len) {
    std::uniform_int_distribution<Letter> letter_pick(0, (Letter{1} << prop_count) - 1);
    Trace trace(len);
    for (auto& letter : trace) letter = letter_pick(rng);
    return trace;
}

}  // namespace besynth::test
