#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace besynth {

/// Partitioned propositional alphabet. Environment variables come first in
/// the global proposition order, agent variables after them. The index of a
/// proposition in that order is used everywhere else (formula atoms, trace
/// letters, BDD variables).
class Partition {
public:
    Partition() = default;

    Partition(std::vector<std::string> env_vars, std::vector<std::string> agent_vars)
        : env_vars_(std::move(env_vars)), agent_vars_(std::move(agent_vars)) {
        std::size_t index = 0;
        for (const auto& name : env_vars_) insert_name(name, index++);
        for (const auto& name : agent_vars_) insert_name(name, index++);
    }

    /// Parses the partition file format:
    ///   .inputs: a b c
    ///   .outputs: d e
    /// Inputs are environment variables, outputs agent variables. Blank
    /// lines and lines starting with '#' are ignored.
    static Partition parse(const std::string& text) {
        std::vector<std::string> inputs;
        std::vector<std::string> outputs;
        bool saw_inputs = false;
        bool saw_outputs = false;

        std::istringstream stream(text);
        std::string line;
        while (std::getline(stream, line)) {
            std::istringstream words(line);
            std::string word;
            if (!(words >> word)) continue;
            if (word[0] == '#') continue;
            std::vector<std::string>* target = nullptr;
            if (word == ".inputs:") {
                saw_inputs = true;
                target = &inputs;
            } else if (word == ".outputs:") {
                if (!saw_inputs)
                    throw std::invalid_argument("partition file: .outputs before .inputs");
                saw_outputs = true;
                target = &outputs;
            } else {
                throw std::invalid_argument("partition file: unexpected token '" + word + "'");
            }
            while (words >> word) target->push_back(word);
        }
        if (!saw_inputs || !saw_outputs)
            throw std::invalid_argument("partition file: missing .inputs or .outputs line");
        return Partition(std::move(inputs), std::move(outputs));
    }

    static Partition from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open partition file: " + path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return parse(buffer.str());
    }

    std::string to_text() const {
        std::ostringstream out;
        out << ".inputs:";
        for (const auto& name : env_vars_) out << ' ' << name;
        out << "\n.outputs:";
        for (const auto& name : agent_vars_) out << ' ' << name;
        out << '\n';
        return out.str();
    }

    std::size_t env_count() const { return env_vars_.size(); }
    std::size_t agent_count() const { return agent_vars_.size(); }
    std::size_t prop_count() const { return env_vars_.size() + agent_vars_.size(); }

    const std::vector<std::string>& env_vars() const { return env_vars_; }
    const std::vector<std::string>& agent_vars() const { return agent_vars_; }

    bool is_env(std::size_t index) const { return index < env_vars_.size(); }

    const std::string& name(std::size_t index) const {
        return index < env_vars_.size() ? env_vars_[index]
                                        : agent_vars_[index - env_vars_.size()];
    }

    std::optional<std::uint32_t> find(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    bool operator==(const Partition& other) const {
        return env_vars_ == other.env_vars_ && agent_vars_ == other.agent_vars_;
    }

private:
    void insert_name(const std::string& name, std::size_t index) {
        if (name.empty()) throw std::invalid_argument("partition: empty proposition name");
        if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
            throw std::invalid_argument("partition: invalid proposition name '" + name + "'");
        if (!index_.emplace(name, static_cast<std::uint32_t>(index)).second)
            throw std::invalid_argument("partition: duplicate proposition '" + name + "'");
    }

    std::vector<std::string> env_vars_;
    std::vector<std::string> agent_vars_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

}  // namespace besynth
