#pragma once

#include <cstdint>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "besynth/bdd.hpp"
#include "besynth/explicit_dfa.hpp"
#include "besynth/formula.hpp"
#include "besynth/minimize.hpp"
#include "besynth/semantics.hpp"

namespace besynth {

struct TranslateOptions {
    std::size_t state_cap = 1'000'000;
    std::size_t prop_cap = kMaxExplicitProps;
};

namespace detail {

/// Formula progression with propositionally canonical states. An automaton
/// state is a Boolean function over next-step obligations X h / WX h,
/// represented as a BDD whose variables stand for the obligations. Consuming
/// a letter substitutes every obligation variable by the expansion of its
/// content under that letter, where temporal operators unfold one step:
///
///   a U b  ->  step(b) | (step(a) & X(a U b))
///   a R b  ->  step(b) & (step(a) | WX(a R b))
///   F a    ->  step(a) | X(F a)
///   G a    ->  step(a) & WX(G a)
///
/// The obligation vocabulary stays inside the (finite) closure of the input,
/// and BDD canonicity merges propositionally equivalent obligation sets, so
/// the construction terminates. A state is final iff its function holds
/// under the end-of-trace valuation: strong obligations false, weak true.
class Progression {
public:
    explicit Progression(FormulaStore& store) : store_(store) {}

    Bdd initial(FormulaId nnf_formula) {
        return mgr_.var(term_var(store_.next(nnf_formula)));
    }

    Bdd step(const Bdd& state, Letter letter) {
        std::vector<std::pair<std::uint32_t, Bdd>> subst;
        for (std::uint32_t v : support(state))
            subst.emplace_back(v, expand(store_.node(term_of_var_[v]).left, letter));
        return mgr_.compose(state, subst);
    }

    bool is_final(const Bdd& state) {
        return mgr_.eval(state, [&](std::uint32_t v) {
            return store_.node(term_of_var_[v]).op == FormulaOp::WeakNext;
        });
    }

private:
    std::uint32_t term_var(FormulaId wrapped) {
        auto it = var_of_term_.find(wrapped);
        if (it != var_of_term_.end()) return it->second;
        std::uint32_t v = mgr_.new_var();
        term_of_var_.push_back(wrapped);
        var_of_term_.emplace(wrapped, v);
        return v;
    }

    Bdd expand(FormulaId g, Letter letter) {
        std::uint64_t key = (static_cast<std::uint64_t>(g) << 20) | letter;
        auto it = expand_cache_.find(key);
        if (it != expand_cache_.end()) return it->second;
        Bdd result = expand_uncached(g, letter);
        expand_cache_.emplace(key, result);
        return result;
    }

    Bdd expand_uncached(FormulaId g, Letter letter) {
        const FormulaNode& n = store_.node(g);
        switch (n.op) {
            case FormulaOp::True:
                return mgr_.bdd_true();
            case FormulaOp::False:
                return mgr_.bdd_false();
            case FormulaOp::Atom:
                return ((letter >> n.atom) & 1u) ? mgr_.bdd_true() : mgr_.bdd_false();
            case FormulaOp::Not:
                // NNF: negation only sits on atoms.
                return ((letter >> store_.node(n.left).atom) & 1u) ? mgr_.bdd_false()
                                                                   : mgr_.bdd_true();
            case FormulaOp::And:
                return expand(n.left, letter) & expand(n.right, letter);
            case FormulaOp::Or:
                return expand(n.left, letter) | expand(n.right, letter);
            case FormulaOp::Next:
            case FormulaOp::WeakNext:
                return mgr_.var(term_var(g));
            case FormulaOp::Until:
                return expand(n.right, letter) |
                       (expand(n.left, letter) & mgr_.var(term_var(store_.next(g))));
            case FormulaOp::Release:
                return expand(n.right, letter) &
                       (expand(n.left, letter) | mgr_.var(term_var(store_.weak_next(g))));
            case FormulaOp::Eventually:
                return expand(n.left, letter) | mgr_.var(term_var(store_.next(g)));
            case FormulaOp::Always:
                return expand(n.left, letter) & mgr_.var(term_var(store_.weak_next(g)));
            case FormulaOp::Implies:
                throw std::logic_error("expand: formula not in NNF");
        }
        return mgr_.bdd_false();  // unreachable
    }

    std::vector<std::uint32_t> support(const Bdd& f) {
        std::vector<std::uint32_t> vars;
        std::unordered_set<std::uint32_t> seen;
        std::vector<Bdd> stack{f};
        while (!stack.empty()) {
            Bdd node = stack.back();
            stack.pop_back();
            if (mgr_.is_leaf(node) || !seen.insert(node.id()).second) continue;
            vars.push_back(mgr_.top_var(node));
            stack.push_back(mgr_.high(node));
            stack.push_back(mgr_.low(node));
        }
        return vars;
    }

    FormulaStore& store_;
    DdManager mgr_;
    std::vector<FormulaId> term_of_var_;
    std::unordered_map<FormulaId, std::uint32_t> var_of_term_;
    std::unordered_map<std::uint64_t, Bdd> expand_cache_;
};

}  // namespace detail

/// LTLf-to-DFA translation by NNF formula progression. The returned DFA is
/// complete, minimal, and accepts exactly the nonempty traces satisfying the
/// formula: accepts(translate(f), pi) == evaluate(f, pi, 0).
inline ExplicitDfa translate(FormulaStore& store, FormulaId formula,
                             const TranslateOptions& options = {}) {
    const Partition& partition = store.partition();
    if (partition.prop_count() > options.prop_cap ||
        partition.prop_count() > kMaxExplicitProps)
        throw ResourceLimitError("translate: proposition count exceeds cap");
    const std::size_t letters = std::size_t{1} << partition.prop_count();

    detail::Progression progression(store);
    Bdd start = progression.initial(to_nnf(store, formula));

    std::unordered_map<std::uint32_t, std::uint32_t> index_of;
    std::vector<Bdd> states{start};
    index_of.emplace(start.id(), 0);
    std::vector<std::uint32_t> delta;

    for (std::size_t i = 0; i < states.size(); ++i) {
        for (Letter letter = 0; letter < letters; ++letter) {
            Bdd succ = progression.step(states[i], letter);
            auto [it, inserted] =
                index_of.emplace(succ.id(), static_cast<std::uint32_t>(states.size()));
            if (inserted) {
                states.push_back(succ);
                if (states.size() > options.state_cap)
                    throw ResourceLimitError("translate: state cap exceeded");
            }
            delta.push_back(it->second);
        }
    }

    ExplicitDfa dfa;
    dfa.partition = partition;
    dfa.state_count = static_cast<std::uint32_t>(states.size());
    dfa.initial = 0;
    dfa.delta = std::move(delta);
    dfa.finals.resize(dfa.state_count);
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        dfa.finals[s] = progression.is_final(states[s]);

    // The initial state's acceptance bit only decides the empty word, which
    // is outside the accepted domain. When no transition re-enters the
    // initial state the bit is free, so take whichever choice minimizes
    // smaller.
    bool initial_reentered = false;
    for (std::uint32_t t : dfa.delta)
        if (t == dfa.initial) {
            initial_reentered = true;
            break;
        }
    ExplicitDfa minimized = minimize(dfa);
    if (!initial_reentered) {
        dfa.finals[dfa.initial] = !dfa.finals[dfa.initial];
        ExplicitDfa flipped = minimize(dfa);
        if (flipped.state_count < minimized.state_count) return flipped;
    }
    return minimized;
}

}  // namespace besynth
