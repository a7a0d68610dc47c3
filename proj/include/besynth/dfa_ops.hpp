#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "besynth/explicit_dfa.hpp"
#include "besynth/minimize.hpp"

namespace besynth {

/// Complement within (2^(X u Y))^+: flip the final set of a complete DFA.
/// The complement of a minimal complete DFA is again minimal.
inline ExplicitDfa complement(const ExplicitDfa& dfa) {
    ExplicitDfa out = dfa;
    for (std::uint32_t s = 0; s < out.state_count; ++s) out.finals[s] = !out.finals[s];
    return out;
}

namespace detail {

/// Reachable synchronous product of two transition systems; finals are
/// combined by `final_rule(a_final, b_final)`.
template <typename FinalRule>
inline ExplicitDfa product2(const ExplicitDfa& a, const ExplicitDfa& b,
                            FinalRule&& final_rule) {
    if (!(a.partition == b.partition))
        throw std::invalid_argument("product: partitions differ");
    const std::size_t letters = a.letter_count();

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> index_of;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    auto intern = [&](std::uint32_t sa, std::uint32_t sb) {
        auto [it, inserted] = index_of.emplace(std::make_pair(sa, sb),
                                               static_cast<std::uint32_t>(pairs.size()));
        if (inserted) pairs.emplace_back(sa, sb);
        return it->second;
    };

    intern(a.initial, b.initial);
    std::vector<std::uint32_t> delta;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [sa, sb] = pairs[i];
        for (Letter letter = 0; letter < letters; ++letter)
            delta.push_back(intern(a.next(sa, letter), b.next(sb, letter)));
    }

    ExplicitDfa out;
    out.partition = a.partition;
    out.state_count = static_cast<std::uint32_t>(pairs.size());
    out.initial = 0;
    out.delta = std::move(delta);
    out.finals.resize(out.state_count);
    for (std::uint32_t s = 0; s < out.state_count; ++s)
        out.finals[s] = final_rule(a.finals[pairs[s].first], b.finals[pairs[s].second]);
    return out;
}

}  // namespace detail

/// Intersection: reachable product with conjunctive finals, minimized.
inline ExplicitDfa intersect(const ExplicitDfa& a, const ExplicitDfa& b) {
    return minimize(detail::product2(a, b, [](bool fa, bool fb) { return fa && fb; }));
}

/// Same language over nonempty words, but with a non-final initial state
/// that no transition re-enters. Game arenas need this: the acceptance bit of
/// a re-entered initial state is determined by the nonempty words ending
/// there, while at instant zero only the empty prefix has elapsed, which
/// satisfies nothing.
inline ExplicitDfa with_fresh_initial(const ExplicitDfa& dfa) {
    bool reentered = false;
    for (std::uint32_t t : dfa.delta)
        if (t == dfa.initial) {
            reentered = true;
            break;
        }
    ExplicitDfa out = dfa;
    if (!reentered) {
        out.finals[out.initial] = false;
        return out;
    }
    const std::size_t letters = dfa.letter_count();
    std::uint32_t fresh = out.state_count++;
    out.delta.resize(static_cast<std::size_t>(out.state_count) * letters);
    for (Letter a = 0; a < letters; ++a)
        out.delta[static_cast<std::size_t>(fresh) * letters + a] = dfa.next(dfa.initial, a);
    out.finals.push_back(false);
    out.initial = fresh;
    return out;
}

/// Synchronous product transition system of several DFAs over one alphabet,
/// restricted to the reachable fragment, with the final set of every
/// component lifted to the product.
struct ExplicitProduct {
    Partition partition;
    std::uint32_t state_count = 0;
    std::uint32_t initial = 0;
    std::vector<std::uint32_t> delta;
    std::vector<std::vector<std::uint32_t>> tuples;   // product state -> component states
    std::vector<std::vector<bool>> lifted_finals;     // one bitset per component

    std::size_t letter_count() const { return std::size_t{1} << partition.prop_count(); }
    std::uint32_t next(std::uint32_t state, Letter letter) const {
        return delta[static_cast<std::size_t>(state) * letter_count() + letter];
    }
};

inline ExplicitProduct product_ts(const std::vector<const ExplicitDfa*>& components) {
    if (components.empty()) throw std::invalid_argument("product_ts: no components");
    for (const ExplicitDfa* d : components)
        if (!(d->partition == components[0]->partition))
            throw std::invalid_argument("product_ts: partitions differ");
    const std::size_t letters = components[0]->letter_count();

    std::map<std::vector<std::uint32_t>, std::uint32_t> index_of;
    std::vector<std::vector<std::uint32_t>> tuples;
    auto intern = [&](std::vector<std::uint32_t> tuple) {
        auto [it, inserted] = index_of.try_emplace(std::move(tuple),
                                                   static_cast<std::uint32_t>(tuples.size()));
        if (inserted) tuples.push_back(it->first);
        return it->second;
    };

    std::vector<std::uint32_t> start;
    for (const ExplicitDfa* d : components) start.push_back(d->initial);
    intern(std::move(start));

    std::vector<std::uint32_t> delta;
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        for (Letter letter = 0; letter < letters; ++letter) {
            std::vector<std::uint32_t> succ(components.size());
            for (std::size_t c = 0; c < components.size(); ++c)
                succ[c] = components[c]->next(tuples[i][c], letter);
            delta.push_back(intern(std::move(succ)));
        }
    }

    ExplicitProduct out;
    out.partition = components[0]->partition;
    out.state_count = static_cast<std::uint32_t>(tuples.size());
    out.initial = 0;
    out.delta = std::move(delta);
    out.tuples = std::move(tuples);
    out.lifted_finals.resize(components.size());
    for (std::size_t c = 0; c < components.size(); ++c) {
        out.lifted_finals[c].resize(out.state_count);
        for (std::uint32_t s = 0; s < out.state_count; ++s)
            out.lifted_finals[c][s] = components[c]->finals[out.tuples[s][c]];
    }
    return out;
}

/// Language equality of two complete DFAs over the same alphabet, by
/// product reachability. Empty-word membership is ignored (the accepted
/// domain is nonempty traces).
inline bool language_equal(const ExplicitDfa& a, const ExplicitDfa& b) {
    if (!(a.partition == b.partition)) return false;
    const std::size_t letters = a.letter_count();
    std::map<std::pair<std::uint32_t, std::uint32_t>, bool> seen;
    std::queue<std::pair<std::uint32_t, std::uint32_t>> queue;
    auto visit = [&](std::uint32_t sa, std::uint32_t sb, bool check) {
        if (check && a.finals[sa] != b.finals[sb]) return false;
        if (seen.emplace(std::make_pair(sa, sb), true).second) queue.emplace(sa, sb);
        return true;
    };
    visit(a.initial, b.initial, false);
    while (!queue.empty()) {
        auto [sa, sb] = queue.front();
        queue.pop();
        for (Letter letter = 0; letter < letters; ++letter)
            if (!visit(a.next(sa, letter), b.next(sb, letter), true)) return false;
    }
    return true;
}

}  // namespace besynth
