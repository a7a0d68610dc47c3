#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "besynth/pipelines.hpp"

namespace besynth {

/// Counter-game family: an n-bit counter owned by the agent, incremented
/// when the agent grants an environment increment request; the environment
/// promises K consecutive requests, the agent wants all bits set.
struct CounterGameSpec {
    int bits = 1;      // n in 1..10
    int requests = 1;  // K in 1..10

    void check() const {
        if (bits < 1 || bits > 10 || requests < 1 || requests > 10)
            throw std::out_of_range("counter game: n and K must lie in 1..10");
    }
};

inline Partition counter_partition(int bits) {
    std::vector<std::string> agent_vars{"grant"};
    for (int i = 0; i < bits; ++i) agent_vars.push_back("b" + std::to_string(i));
    return Partition({"add"}, std::move(agent_vars));
}

/// E_K = F(add & WX add & WX WX add & ...), K conjuncts in total.
inline FormulaId counter_env_spec(FormulaStore& store, int requests) {
    FormulaId add = store.atom(*store.partition().find("add"));
    FormulaId conj = add;
    FormulaId nested = add;
    for (int i = 1; i < requests; ++i) {
        nested = store.weak_next(nested);
        conj = store.conjunction(conj, nested);
    }
    return store.eventually(conj);
}

/// phi = Init & Dynamics & F(all bits set): bits start at zero and follow a
/// ripple-carry increment exactly when the agent grants a request
/// (inc = add & grant, carry chain c0 = inc, c_{i+1} = c_i & b_i). The
/// per-instant rules use weak next so a trace may end anywhere.
inline FormulaId counter_goal(FormulaStore& store, int bits) {
    const Partition& partition = store.partition();
    FormulaId add = store.atom(*partition.find("add"));
    FormulaId grant = store.atom(*partition.find("grant"));
    std::vector<FormulaId> bit;
    for (int i = 0; i < bits; ++i) bit.push_back(store.atom(*partition.find("b" + std::to_string(i))));

    FormulaId init = store.negation(bit[0]);
    for (int i = 1; i < bits; ++i)
        init = store.conjunction(init, store.negation(bit[i]));

    FormulaId carry = store.conjunction(add, grant);
    FormulaId rules = kNoFormula;
    for (int i = 0; i < bits; ++i) {
        FormulaId flip = store.conjunction(
            store.implication(bit[i], store.weak_next(store.negation(bit[i]))),
            store.implication(store.negation(bit[i]), store.weak_next(bit[i])));
        FormulaId hold = store.conjunction(
            store.implication(bit[i], store.weak_next(bit[i])),
            store.implication(store.negation(bit[i]),
                              store.weak_next(store.negation(bit[i]))));
        FormulaId rule = store.conjunction(store.implication(carry, flip),
                                           store.implication(store.negation(carry), hold));
        rules = rules == kNoFormula ? rule : store.conjunction(rules, rule);
        carry = store.conjunction(carry, bit[i]);
    }
    FormulaId dynamics = store.always(rules);

    FormulaId all_set = bit[0];
    for (int i = 1; i < bits; ++i) all_set = store.conjunction(all_set, bit[i]);

    return store.conjunction(store.conjunction(init, dynamics),
                             store.eventually(all_set));
}

/// The full problem for one grid cell. The store must have been created
/// over counter_partition(spec.bits).
inline Problem gen_counter_game(FormulaStore& store, const CounterGameSpec& spec) {
    spec.check();
    if (!(store.partition() == counter_partition(spec.bits)))
        throw std::invalid_argument("counter game: store partition mismatch");
    Problem problem;
    problem.store = &store;
    problem.env_spec = counter_env_spec(store, spec.requests);
    problem.goal = counter_goal(store, spec.bits);
    return problem;
}

/// Number of conjuncts directly under the eventuality of an environment
/// specification, for structural checks.
inline int top_conjunct_count(const FormulaStore& store, FormulaId eventually_conj) {
    const FormulaNode& n = store.node(eventually_conj);
    if (n.op != FormulaOp::Eventually) return 0;
    int count = 1;
    FormulaId walk = n.left;
    while (store.node(walk).op == FormulaOp::And) {
        ++count;
        walk = store.node(walk).left;
    }
    return count;
}

}  // namespace besynth
