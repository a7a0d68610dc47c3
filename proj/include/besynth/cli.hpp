#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besynth/bench.hpp"
#include "besynth/parser.hpp"
#include "besynth/pipelines.hpp"
#include "besynth/transducer.hpp"
#include "besynth/validate.hpp"

namespace besynth {

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
}

struct LoadedProblem {
    std::unique_ptr<FormulaStore> store;
    Problem problem;
};

inline LoadedProblem load_problem(const std::string& env_path,
                                  const std::string& goal_path,
                                  const std::string& part_path) {
    LoadedProblem loaded;
    loaded.store = std::make_unique<FormulaStore>(Partition::from_file(part_path));
    loaded.problem.store = loaded.store.get();
    loaded.problem.env_spec = parse_formula(*loaded.store, read_file(env_path));
    loaded.problem.goal = parse_formula(*loaded.store, read_file(goal_path));
    return loaded;
}

inline std::vector<std::string> split_algorithms(const std::string& list) {
    std::vector<std::string> algorithms;
    std::istringstream stream(list);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        if (item != "1" && item != "2" && item != "3" && item != "r")
            throw CLI::ValidationError("--algs", "algorithms are 1, 2, 3 or r");
        algorithms.push_back(item);
    }
    if (algorithms.empty())
        throw CLI::ValidationError("--algs", "no algorithms selected");
    return algorithms;
}

}  // namespace detail

/// Entry point behind the `besynth` binary. Subcommands: synth, bench
/// counter, validate, dfa. Exit codes: 0 success, 1 usage error, 2 resource
/// limit or timeout, 3 internal invariant violation.
inline int run_cli(int argc, char** argv) {
    CLI::App app{"symbolic best-effort synthesis for LTLf"};
    app.require_subcommand(1);

    // --- synth ---
    auto* synth = app.add_subcommand("synth", "synthesize a best-effort strategy");
    std::string env_path, goal_path, part_path;
    int algorithm = 3;
    std::string dot_path, json_path;
    synth->add_option("--env", env_path, "environment specification file")->required();
    synth->add_option("--goal", goal_path, "agent goal file")->required();
    synth->add_option("--part", part_path, "variable partition file")->required();
    synth->add_option("--alg", algorithm, "pipeline: 1 monolithic, 2 explicit, 3 symbolic")
        ->check(CLI::Range(1, 3));
    synth->add_option("--dot", dot_path, "write the strategy transducer as DOT");
    synth->add_option("--json", json_path, "write the result record as JSON");

    // --- bench counter ---
    auto* bench = app.add_subcommand("bench", "run benchmarks");
    bench->require_subcommand(1);
    auto* counter = bench->add_subcommand("counter", "counter-game grid");
    int n_max = 3, k_max = 5;
    std::string algs = "1,2,3";
    double timeout_s = 1000.0;
    std::string csv_path, bench_json_path;
    bool no_isolation = false;
    counter->add_option("--n-max", n_max, "largest bit count")->check(CLI::Range(1, 10));
    counter->add_option("--k-max", k_max, "largest request count")
        ->check(CLI::Range(1, 10));
    counter->add_option("--algs", algs, "comma-separated algorithms (1,2,3,r)");
    counter->add_option("--timeout", timeout_s, "per-instance budget in seconds");
    counter->add_option("--csv", csv_path, "write records as CSV");
    counter->add_option("--json", bench_json_path, "write records as JSON");
    counter->add_flag("--no-isolation", no_isolation,
                      "run instances in-process (no timeout enforcement)");

    // --- validate ---
    auto* validate_cmd =
        app.add_subcommand("validate", "brute-force best-effort check at small scale");
    std::string v_env, v_goal, v_part;
    int v_alg = 3;
    unsigned max_states = 8;
    validate_cmd->add_option("--env", v_env, "environment specification file")->required();
    validate_cmd->add_option("--goal", v_goal, "agent goal file")->required();
    validate_cmd->add_option("--part", v_part, "variable partition file")->required();
    validate_cmd->add_option("--alg", v_alg, "pipeline to synthesize the strategy")
        ->check(CLI::Range(1, 3));
    validate_cmd->add_option("--max-states", max_states,
                             "largest product arena to enumerate");

    // --- dfa ---
    auto* dfa_cmd = app.add_subcommand("dfa", "translate one formula to a DFA");
    std::string formula_path, dfa_part_path, dfa_dot_path, dfa_text_path;
    dfa_cmd->add_option("--formula", formula_path, "formula file")->required();
    dfa_cmd->add_option("--part", dfa_part_path, "variable partition file")->required();
    dfa_cmd->add_option("--dot", dfa_dot_path, "write the automaton as DOT");
    dfa_cmd->add_option("--text", dfa_text_path, "write the line-based text format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            detail::LoadedProblem loaded =
                detail::load_problem(env_path, goal_path, part_path);
            SynthesisResult result = run_algorithm(algorithm, loaded.problem);
            if (!result.env_enforceable)
                std::cerr << "warning: the environment cannot enforce the stated "
                             "specification\n";
            std::cout << (result.realizable ? "REALIZABLE" : "BEST-EFFORT-ONLY")
                      << '\n';
            if (!dot_path.empty())
                detail::write_file(dot_path, transducer_to_dot(result));
            if (!json_path.empty())
                detail::write_file(json_path, result_to_json(result).dump(2) + "\n");
            return 0;
        }

        if (counter->parsed()) {
            BenchOptions options;
            options.timeout_s = timeout_s;
            options.isolate = !no_isolation;
            std::vector<BenchRecord> records = run_bench(
                counter_grid(n_max, k_max), detail::split_algorithms(algs), options);
            std::string csv = bench_records_to_csv(records);
            if (!csv_path.empty()) detail::write_file(csv_path, csv);
            if (!bench_json_path.empty()) {
                nlohmann::json array = nlohmann::json::array();
                for (const BenchRecord& r : records) array.push_back(r.to_json());
                detail::write_file(bench_json_path, array.dump(2) + "\n");
            }
            if (csv_path.empty() && bench_json_path.empty()) std::cout << csv;
            for (const BenchRecord& r : records)
                if (r.timed_out) return 2;
            return 0;
        }

        if (validate_cmd->parsed()) {
            detail::LoadedProblem loaded = detail::load_problem(v_env, v_goal, v_part);
            SynthesisResult result = run_algorithm(v_alg, loaded.problem);
            ValidationBounds bounds;
            bounds.max_states = max_states;
            ValidationReport report = validate(loaded.problem, result, bounds);
            if (!report.ran) {
                std::cout << "SKIPPED: " << report.skipped_reason << " ("
                          << report.arena_states << " states)\n";
                return 2;
            }
            std::cout << (report.dominated ? "DOMINATED" : "UNDOMINATED") << '\n';
            std::cout << "arena states: " << report.arena_states << '\n';
            std::cout << "environment strategies: " << report.env_strategy_count
                      << ", enforcing: " << report.enforcing_count
                      << ", beaten by the strategy: " << report.agent_wins << '\n';
            std::cout << "class: " << report.strategy_class << '\n';
            if (!report.search_complete)
                std::cout << "note: dominance search hit its node budget\n";
            return 0;
        }

        if (dfa_cmd->parsed()) {
            FormulaStore store(Partition::from_file(dfa_part_path));
            FormulaId formula = parse_formula(store, detail::read_file(formula_path));
            ExplicitDfa dfa = translate(store, formula);
            if (!dfa_dot_path.empty()) detail::write_file(dfa_dot_path, to_dot(dfa));
            if (!dfa_text_path.empty()) detail::write_file(dfa_text_path, to_text(dfa));
            if (dfa_dot_path.empty() && dfa_text_path.empty())
                std::cout << to_text(dfa);
            return 0;
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error at position " << e.position() << ": " << e.what()
                  << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}

}  // namespace besynth
