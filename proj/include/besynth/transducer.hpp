#pragma once

#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "besynth/pipelines.hpp"

namespace besynth {

/// Reactive executor of a positional strategy: from the current state the
/// agent's output is available first, then one environment input is
/// consumed and the state advances through the transition functions.
class Transducer {
public:
    explicit Transducer(const SynthesisResult& result)
        : result_(&result), state_(result.arena.initial) {}

    void reset() { state_ = result_->arena.initial; }

    const std::vector<bool>& state() const { return state_; }
    const SynthesisResult& result() const { return *result_; }

    /// Packed current state, usable as a cycle-detection key.
    std::uint64_t state_key() const {
        std::uint64_t key = 0;
        for (std::size_t i = 0; i < state_.size(); ++i)
            if (state_[i]) key |= std::uint64_t{1} << i;
        return key;
    }

    /// Agent half of the next letter, already shifted into place.
    Letter pending_output() const {
        const SymbolicArena& arena = result_->arena;
        auto lookup = arena.state_lookup(state_);
        auto move = result_->combined_strategy.respond(*result_->mgr, lookup);
        Letter y = 0;
        for (std::size_t j = 0; j < move.size(); ++j)
            if (move[j].second) y |= Letter{1} << (arena.partition.env_count() + j);
        return y;
    }

    /// Consumes one environment input (bits in environment positions) and
    /// advances; returns the full letter that was played.
    Letter step(Letter env_input) {
        const SymbolicArena& arena = result_->arena;
        Letter letter = pending_output() | env_input;
        std::unordered_map<std::uint32_t, bool> values;
        for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
            values[arena.state_vars[i]] = state_[i];
        for (std::size_t i = 0; i < arena.partition.prop_count(); ++i)
            values[arena.alphabet.var_of_prop(arena.partition, i)] = (letter >> i) & 1u;
        auto full = [&](std::uint32_t v) {
            auto it = values.find(v);
            return it != values.end() && it->second;
        };
        std::vector<bool> next(arena.state_vars.size());
        for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
            next[i] = result_->mgr->eval(arena.eta[i], full);
        state_ = std::move(next);
        return letter;
    }

private:
    const SynthesisResult* result_;
    std::vector<bool> state_;
};

inline Transducer induce(const SynthesisResult& result) { return Transducer(result); }

struct PlayStep {
    Letter letter;                  // X u Y actually played
    std::vector<bool> state_after;  // arena assignment after the step
    bool env_and_goal = false;      // prefix satisfies E & phi
    bool not_env = false;           // prefix satisfies !E
    bool env_implies_goal = false;  // prefix satisfies E -> phi
};

/// One play: the trace, the visited assignments (one more than the steps),
/// and the per-prefix objective flags.
struct PlayRecord {
    std::vector<bool> initial_state;
    std::vector<PlayStep> steps;
};

/// Replays the transducer against a fixed input sequence from its current
/// position, recording per-prefix acceptance of the three objectives.
inline PlayRecord simulate(Transducer& transducer,
                           const std::vector<Letter>& env_inputs) {
    const SynthesisResult& result = transducer.result();
    PlayRecord record;
    record.initial_state = transducer.state();
    for (Letter input : env_inputs) {
        PlayStep step;
        step.letter = transducer.step(input);
        step.state_after = transducer.state();
        auto lookup = result.arena.state_lookup(step.state_after);
        step.env_and_goal = result.mgr->eval(result.objectives.env_and_goal, lookup);
        step.not_env = result.mgr->eval(result.objectives.not_env, lookup);
        step.env_implies_goal =
            result.mgr->eval(result.objectives.env_implies_goal, lookup);
        record.steps.push_back(std::move(step));
    }
    return record;
}

namespace detail {

inline std::string assignment_string(const std::vector<bool>& bits) {
    std::string out;
    out.reserve(bits.size());
    for (bool b : bits) out += b ? '1' : '0';
    return out;
}

inline nlohmann::json letter_json(const Partition& partition, Letter letter, bool env_side) {
    nlohmann::json object = nlohmann::json::object();
    for (std::size_t i = 0; i < partition.prop_count(); ++i)
        if (partition.is_env(i) == env_side)
            object[partition.name(i)] = ((letter >> i) & 1u) != 0;
    return object;
}

}  // namespace detail

/// JSON-lines export: one object per step.
inline std::string play_to_json_lines(const Partition& partition,
                                      const PlayRecord& record) {
    std::ostringstream out;
    for (std::size_t i = 0; i < record.steps.size(); ++i) {
        const PlayStep& step = record.steps[i];
        nlohmann::json line{
            {"step", i},
            {"input", detail::letter_json(partition, step.letter, true)},
            {"output", detail::letter_json(partition, step.letter, false)},
            {"state", detail::assignment_string(step.state_after)},
            {"flags",
             {{"env_and_goal", step.env_and_goal},
              {"not_env", step.not_env},
              {"env_implies_goal", step.env_implies_goal}}},
        };
        out << line.dump() << '\n';
    }
    return out.str();
}

/// Graphviz export of the strategy as a Mealy-style transducer: nodes are
/// the reachable arena assignments, edges are labeled "X-cube / Y values".
inline std::string transducer_to_dot(const SynthesisResult& result) {
    DdManager& mgr = *result.mgr;
    const SymbolicArena& arena = result.arena;
    const Partition& partition = arena.partition;
    const std::size_t env_count = partition.env_count();
    const Letter env_letters = Letter{1} << env_count;

    std::map<std::vector<bool>, std::uint32_t> index_of;
    std::vector<std::vector<bool>> order;
    std::ostringstream edges;

    std::queue<std::vector<bool>> queue;
    index_of.emplace(arena.initial, 0);
    order.push_back(arena.initial);
    queue.push(arena.initial);
    while (!queue.empty()) {
        std::vector<bool> state = queue.front();
        queue.pop();
        std::uint32_t from = index_of.at(state);

        auto lookup = arena.state_lookup(state);
        auto move = result.combined_strategy.respond(mgr, lookup);
        std::string output_label;
        for (std::size_t j = 0; j < move.size(); ++j) {
            if (!output_label.empty()) output_label += ' ';
            if (!move[j].second) output_label += '!';
            output_label += partition.name(env_count + j);
        }
        Letter y_bits = 0;
        for (std::size_t j = 0; j < move.size(); ++j)
            if (move[j].second) y_bits |= Letter{1} << (env_count + j);

        // Group environment inputs by successor and emit cube labels.
        std::map<std::vector<bool>, std::vector<bool>> successors;  // succ -> x set
        for (Letter x = 0; x < env_letters; ++x) {
            Letter letter = x | y_bits;
            std::unordered_map<std::uint32_t, bool> values;
            for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
                values[arena.state_vars[i]] = state[i];
            for (std::size_t i = 0; i < partition.prop_count(); ++i)
                values[arena.alphabet.var_of_prop(partition, i)] = (letter >> i) & 1u;
            auto full = [&](std::uint32_t v) {
                auto it = values.find(v);
                return it != values.end() && it->second;
            };
            std::vector<bool> next(arena.state_vars.size());
            for (std::size_t i = 0; i < arena.state_vars.size(); ++i)
                next[i] = mgr.eval(arena.eta[i], full);
            std::vector<bool>& x_set = successors[next];
            if (x_set.empty()) x_set.assign(env_letters, false);
            x_set[x] = true;
        }
        for (auto& [next, x_set] : successors) {
            auto [it, inserted] =
                index_of.try_emplace(next, static_cast<std::uint32_t>(order.size()));
            if (inserted) {
                order.push_back(next);
                queue.push(next);
            }
            for (const LetterCube& cube : cover_letters(env_count, x_set)) {
                std::string input_label = "true";
                if (cube.mask != 0) {
                    input_label.clear();
                    for (std::size_t i = 0; i < env_count; ++i) {
                        if (!((cube.mask >> i) & 1u)) continue;
                        if (!input_label.empty()) input_label += " & ";
                        if (!((cube.value >> i) & 1u)) input_label += '!';
                        input_label += partition.name(i);
                    }
                }
                edges << "  n" << from << " -> n" << it->second << " [label=\""
                      << input_label << " / " << output_label << "\"];\n";
            }
        }
    }

    std::ostringstream out;
    out << "digraph strategy {\n  rankdir=LR;\n  init [shape=point];\n";
    for (std::uint32_t i = 0; i < order.size(); ++i)
        out << "  n" << i << " [shape=box,label=\""
            << detail::assignment_string(order[i]) << "\"];\n";
    out << "  init -> n0;\n" << edges.str() << "}\n";
    return out.str();
}

}  // namespace besynth
