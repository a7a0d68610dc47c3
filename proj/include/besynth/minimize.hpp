#pragma once

#include <cstdint>
#include <deque>
#include <queue>
#include <vector>

#include "besynth/explicit_dfa.hpp"

namespace besynth {

namespace detail {

/// Hopcroft partition refinement on the reachable part of a complete DFA.
/// Returns the block index of every reachable state (kDead for unreachable
/// ones) and the block count.
inline constexpr std::uint32_t kDead = UINT32_MAX;

inline std::pair<std::vector<std::uint32_t>, std::uint32_t> hopcroft_blocks(
    const ExplicitDfa& dfa) {
    const std::size_t letters = dfa.letter_count();
    const std::uint32_t n = dfa.state_count;

    // Reachable states.
    std::vector<bool> reachable(n, false);
    {
        std::queue<std::uint32_t> queue;
        queue.push(dfa.initial);
        reachable[dfa.initial] = true;
        while (!queue.empty()) {
            std::uint32_t s = queue.front();
            queue.pop();
            for (Letter a = 0; a < letters; ++a) {
                std::uint32_t t = dfa.next(s, a);
                if (!reachable[t]) {
                    reachable[t] = true;
                    queue.push(t);
                }
            }
        }
    }

    // Inverse transitions per letter (reachable states only).
    std::vector<std::vector<std::vector<std::uint32_t>>> inv(
        letters, std::vector<std::vector<std::uint32_t>>(n));
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!reachable[s]) continue;
        for (Letter a = 0; a < letters; ++a) inv[a][dfa.next(s, a)].push_back(s);
    }

    std::vector<std::uint32_t> block_of(n, kDead);
    std::vector<std::vector<std::uint32_t>> members;
    auto new_block = [&]() {
        members.emplace_back();
        return static_cast<std::uint32_t>(members.size() - 1);
    };

    std::uint32_t final_block = new_block();
    std::uint32_t other_block = new_block();
    for (std::uint32_t s = 0; s < n; ++s) {
        if (!reachable[s]) continue;
        std::uint32_t b = dfa.finals[s] ? final_block : other_block;
        block_of[s] = b;
        members[b].push_back(s);
    }
    // Drop an empty side.
    if (members[other_block].empty() || members[final_block].empty()) {
        std::uint32_t keep = members[final_block].empty() ? other_block : final_block;
        std::vector<std::vector<std::uint32_t>> only{std::move(members[keep])};
        members = std::move(only);
        for (auto& b : block_of)
            if (b != kDead) b = 0;
    }

    std::deque<std::pair<std::uint32_t, Letter>> worklist;
    std::vector<bool> in_worklist;
    auto wl_index = [&](std::uint32_t block, Letter a) {
        return static_cast<std::size_t>(block) * letters + a;
    };
    auto push_work = [&](std::uint32_t block, Letter a) {
        std::size_t idx = wl_index(block, a);
        if (in_worklist.size() <= idx) in_worklist.resize((members.size()) * letters, false);
        if (!in_worklist[idx]) {
            in_worklist[idx] = true;
            worklist.emplace_back(block, a);
        }
    };
    for (Letter a = 0; a < letters; ++a) {
        for (std::uint32_t b = 0; b < members.size(); ++b) push_work(b, a);
    }

    std::vector<std::uint32_t> touched_count(members.size(), 0);
    std::vector<std::uint32_t> touched_blocks;
    std::vector<std::vector<std::uint32_t>> touched_members(members.size());

    while (!worklist.empty()) {
        auto [splitter, a] = worklist.front();
        worklist.pop_front();
        in_worklist[wl_index(splitter, a)] = false;

        touched_blocks.clear();
        for (std::uint32_t s : members[splitter]) {
            for (std::uint32_t p : inv[a][s]) {
                std::uint32_t b = block_of[p];
                if (touched_count[b]++ == 0) touched_blocks.push_back(b);
                touched_members[b].push_back(p);
            }
        }

        for (std::uint32_t b : touched_blocks) {
            std::uint32_t hits = touched_count[b];
            touched_count[b] = 0;
            if (hits == members[b].size()) {
                touched_members[b].clear();
                continue;  // no split
            }
            std::uint32_t fresh = new_block();
            touched_count.push_back(0);
            touched_members.emplace_back();
            members[fresh] = std::move(touched_members[b]);
            touched_members[b].clear();
            for (std::uint32_t s : members[fresh]) block_of[s] = fresh;
            std::vector<std::uint32_t> rest;
            rest.reserve(members[b].size() - hits);
            for (std::uint32_t s : members[b])
                if (block_of[s] == b) rest.push_back(s);
            members[b] = std::move(rest);

            in_worklist.resize(members.size() * letters, false);
            std::uint32_t smaller = members[fresh].size() < members[b].size() ? fresh : b;
            for (Letter c = 0; c < letters; ++c) {
                if (in_worklist[wl_index(b, c)]) push_work(fresh, c);
                else push_work(smaller, c);
            }
        }
    }

    return {std::move(block_of), static_cast<std::uint32_t>(members.size())};
}

}  // namespace detail

/// Language-preserving minimization of a complete DFA: unreachable states
/// are removed, equivalent states merged, and the result renumbered in BFS
/// order from the initial state (letter order breaks ties).
inline ExplicitDfa minimize(const ExplicitDfa& dfa) {
    const std::size_t letters = dfa.letter_count();
    auto [block_of, block_count] = detail::hopcroft_blocks(dfa);

    // Representative state per block, plus BFS renumbering over blocks.
    std::vector<std::uint32_t> repr(block_count, detail::kDead);
    for (std::uint32_t s = 0; s < dfa.state_count; ++s)
        if (block_of[s] != detail::kDead && repr[block_of[s]] == detail::kDead)
            repr[block_of[s]] = s;

    std::vector<std::uint32_t> order_of(block_count, detail::kDead);
    std::vector<std::uint32_t> bfs;
    std::uint32_t init_block = block_of[dfa.initial];
    order_of[init_block] = 0;
    bfs.push_back(init_block);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        std::uint32_t b = bfs[i];
        for (Letter a = 0; a < letters; ++a) {
            std::uint32_t tb = block_of[dfa.next(repr[b], a)];
            if (order_of[tb] == detail::kDead) {
                order_of[tb] = static_cast<std::uint32_t>(bfs.size());
                bfs.push_back(tb);
            }
        }
    }

    ExplicitDfa out;
    out.partition = dfa.partition;
    out.state_count = static_cast<std::uint32_t>(bfs.size());
    out.initial = 0;
    out.delta.resize(static_cast<std::size_t>(out.state_count) * letters);
    out.finals.resize(out.state_count);
    for (std::uint32_t idx = 0; idx < bfs.size(); ++idx) {
        std::uint32_t b = bfs[idx];
        out.finals[idx] = dfa.finals[repr[b]];
        for (Letter a = 0; a < letters; ++a)
            out.delta[static_cast<std::size_t>(idx) * letters + a] =
                order_of[block_of[dfa.next(repr[b], a)]];
    }
    return out;
}

}  // namespace besynth
