#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "besynth/formula.hpp"

namespace besynth {

/// One interpretation of the alphabet: bit i is the truth value of the
/// proposition with partition index i. Valid for up to 32 propositions;
/// translation limits the count well below that.
using Letter = std::uint32_t;

/// A finite trace. Formula evaluation requires it to be nonempty.
using Trace = std::vector<Letter>;

inline Letter letter_from_names(const Partition& partition,
                                const std::vector<std::string>& names) {
    Letter letter = 0;
    for (const auto& name : names) {
        auto index = partition.find(name);
        if (!index) throw std::invalid_argument("unknown proposition '" + name + "'");
        letter |= Letter{1} << *index;
    }
    return letter;
}

/// Truth of `f` on `trace` at `instant`, by the inductive finite-trace
/// semantics. Next requires a successor instant; WeakNext is vacuously true
/// at the last instant. This is the ground-truth oracle the automata layers
/// are tested against.
inline bool evaluate(const FormulaStore& store, FormulaId f, const Trace& trace,
                     std::size_t instant) {
    if (trace.empty()) throw std::out_of_range("evaluate: empty trace");
    if (instant >= trace.size()) throw std::out_of_range("evaluate: instant out of range");
    const std::size_t last = trace.size() - 1;
    const FormulaNode& n = store.node(f);
    switch (n.op) {
        case FormulaOp::True: return true;
        case FormulaOp::False: return false;
        case FormulaOp::Atom: return (trace[instant] >> n.atom) & 1u;
        case FormulaOp::Not: return !evaluate(store, n.left, trace, instant);
        case FormulaOp::And:
            return evaluate(store, n.left, trace, instant) &&
                   evaluate(store, n.right, trace, instant);
        case FormulaOp::Or:
            return evaluate(store, n.left, trace, instant) ||
                   evaluate(store, n.right, trace, instant);
        case FormulaOp::Implies:
            return !evaluate(store, n.left, trace, instant) ||
                   evaluate(store, n.right, trace, instant);
        case FormulaOp::Next:
            return instant < last && evaluate(store, n.left, trace, instant + 1);
        case FormulaOp::WeakNext:
            return instant == last || evaluate(store, n.left, trace, instant + 1);
        case FormulaOp::Until:
            for (std::size_t j = instant; j <= last; ++j) {
                if (evaluate(store, n.right, trace, j)) return true;
                if (!evaluate(store, n.left, trace, j)) return false;
            }
            return false;
        case FormulaOp::Release:
            for (std::size_t j = instant; j <= last; ++j) {
                if (!evaluate(store, n.right, trace, j)) return false;
                if (evaluate(store, n.left, trace, j)) return true;
            }
            return true;
        case FormulaOp::Eventually:
            for (std::size_t j = instant; j <= last; ++j)
                if (evaluate(store, n.left, trace, j)) return true;
            return false;
        case FormulaOp::Always:
            for (std::size_t j = instant; j <= last; ++j)
                if (!evaluate(store, n.left, trace, j)) return false;
            return true;
    }
    return false;  // unreachable
}

/// Negation normal form: negations pushed onto atoms, Implies rewritten,
/// with Release/WeakNext as the duals of Until/Next and Always/Eventually
/// dual to each other. Language-equivalent to the input.
class NnfTransformer {
public:
    explicit NnfTransformer(FormulaStore& store) : store_(store) {}

    FormulaId apply(FormulaId f) { return walk(f, false); }

private:
    FormulaId walk(FormulaId f, bool negate) {
        std::uint64_t key = (static_cast<std::uint64_t>(f) << 1) | (negate ? 1 : 0);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        FormulaId result = rewrite(f, negate);
        cache_.emplace(key, result);
        return result;
    }

    FormulaId rewrite(FormulaId f, bool negate) {
        const FormulaNode n = store_.node(f);
        switch (n.op) {
            case FormulaOp::True: return negate ? store_.ff() : store_.tt();
            case FormulaOp::False: return negate ? store_.tt() : store_.ff();
            case FormulaOp::Atom: return negate ? store_.negation(f) : f;
            case FormulaOp::Not: return walk(n.left, !negate);
            case FormulaOp::And:
                return negate ? store_.disjunction(walk(n.left, true), walk(n.right, true))
                              : store_.conjunction(walk(n.left, false), walk(n.right, false));
            case FormulaOp::Or:
                return negate ? store_.conjunction(walk(n.left, true), walk(n.right, true))
                              : store_.disjunction(walk(n.left, false), walk(n.right, false));
            case FormulaOp::Implies:
                // a -> b  ==  !a || b
                return negate ? store_.conjunction(walk(n.left, false), walk(n.right, true))
                              : store_.disjunction(walk(n.left, true), walk(n.right, false));
            case FormulaOp::Next:
                return negate ? store_.weak_next(walk(n.left, true))
                              : store_.next(walk(n.left, false));
            case FormulaOp::WeakNext:
                return negate ? store_.next(walk(n.left, true))
                              : store_.weak_next(walk(n.left, false));
            case FormulaOp::Until:
                return negate ? store_.release(walk(n.left, true), walk(n.right, true))
                              : store_.until(walk(n.left, false), walk(n.right, false));
            case FormulaOp::Release:
                return negate ? store_.until(walk(n.left, true), walk(n.right, true))
                              : store_.release(walk(n.left, false), walk(n.right, false));
            case FormulaOp::Eventually:
                return negate ? store_.always(walk(n.left, true))
                              : store_.eventually(walk(n.left, false));
            case FormulaOp::Always:
                return negate ? store_.eventually(walk(n.left, true))
                              : store_.always(walk(n.left, false));
        }
        return f;  // unreachable
    }

    FormulaStore& store_;
    std::unordered_map<std::uint64_t, FormulaId> cache_;
};

inline FormulaId to_nnf(FormulaStore& store, FormulaId f) {
    return NnfTransformer(store).apply(f);
}

}  // namespace besynth
