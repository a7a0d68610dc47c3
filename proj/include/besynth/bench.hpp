#pragma once

#include <sys/types.h>
#include <sys/wait.h>

#include <poll.h>
#include <signal.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "besynth/counter_game.hpp"
#include "besynth/pipelines.hpp"

namespace besynth {

/// One benchmark measurement: a counter-game cell, the algorithm that ran,
/// the per-stage wall times and the verdict, or a timeout marker.
struct BenchRecord {
    int bits = 0;
    int requests = 0;
    std::string algorithm;  // "1", "2", "3", or "r" for the reactive baseline
    std::string verdict;    // empty on timeout or failure
    StageTimes times;
    bool timed_out = false;
    std::string error;  // nonempty if the worker failed

    nlohmann::json to_json() const {
        return nlohmann::json{
            {"n", bits},
            {"K", requests},
            {"alg", algorithm},
            {"verdict", verdict},
            {"t_translate_ms", times.translate_ms},
            {"t_product_ms", times.product_ms},
            {"t_adv_ms", times.adversarial_ms},
            {"t_coop_ms", times.cooperative_ms},
            {"t_extract_ms", times.extract_ms},
            {"t_total_ms", times.total_ms},
            {"timeout", timed_out},
            {"error", error},
        };
    }

    static BenchRecord from_json(const nlohmann::json& object) {
        BenchRecord record;
        record.bits = object.at("n");
        record.requests = object.at("K");
        record.algorithm = object.at("alg");
        record.verdict = object.at("verdict");
        record.times.translate_ms = object.at("t_translate_ms");
        record.times.product_ms = object.at("t_product_ms");
        record.times.adversarial_ms = object.at("t_adv_ms");
        record.times.cooperative_ms = object.at("t_coop_ms");
        record.times.extract_ms = object.at("t_extract_ms");
        record.times.total_ms = object.at("t_total_ms");
        record.timed_out = object.at("timeout");
        record.error = object.value("error", "");
        return record;
    }
};

inline const char* kBenchCsvHeader =
    "n,K,alg,verdict,t_translate_ms,t_product_ms,t_adv_ms,t_coop_ms,t_extract_ms,"
    "t_total_ms,timeout";

inline std::string bench_records_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << kBenchCsvHeader << '\n';
    for (const BenchRecord& r : records) {
        out << r.bits << ',' << r.requests << ',' << r.algorithm << ',' << r.verdict
            << ',' << r.times.translate_ms << ',' << r.times.product_ms << ','
            << r.times.adversarial_ms << ',' << r.times.cooperative_ms << ','
            << r.times.extract_ms << ',' << r.times.total_ms << ','
            << (r.timed_out ? 1 : 0) << '\n';
    }
    return out.str();
}

/// Runs one counter-game instance in the calling process.
inline BenchRecord run_bench_instance(const CounterGameSpec& spec,
                                      const std::string& algorithm) {
    BenchRecord record;
    record.bits = spec.bits;
    record.requests = spec.requests;
    record.algorithm = algorithm;

    FormulaStore store(counter_partition(spec.bits));
    Problem problem = gen_counter_game(store, spec);
    SynthesisResult result =
        algorithm == "r" ? synth_reactive(problem)
                         : run_algorithm(std::stoi(algorithm), problem);
    record.verdict = result.verdict();
    record.times = result.times;
    return record;
}

namespace detail {

/// Runs the instance in a forked worker with a hard wall-clock budget. The
/// worker reports its record as one JSON line over a pipe; past the budget
/// it is killed and the record carries the timeout flag. Isolation keeps a
/// stuck or memory-blown instance from taking the grid down.
inline BenchRecord run_bench_instance_forked(const CounterGameSpec& spec,
                                             const std::string& algorithm,
                                             double timeout_s) {
    BenchRecord fallback;
    fallback.bits = spec.bits;
    fallback.requests = spec.requests;
    fallback.algorithm = algorithm;

    int fds[2];
    if (pipe(fds) != 0) {
        fallback.error = "pipe failed";
        return fallback;
    }
    pid_t pid = fork();
    if (pid < 0) {
        close(fds[0]);
        close(fds[1]);
        fallback.error = "fork failed";
        return fallback;
    }
    if (pid == 0) {
        close(fds[0]);
        std::string line;
        try {
            line = run_bench_instance(spec, algorithm).to_json().dump();
        } catch (const std::exception& e) {
            BenchRecord failed = fallback;
            failed.error = e.what();
            line = failed.to_json().dump();
        }
        line += '\n';
        ssize_t unused = write(fds[1], line.data(), line.size());
        (void)unused;
        close(fds[1]);
        _exit(0);
    }

    close(fds[1]);
    std::string output;
    auto deadline =
        std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
    bool timed_out = false;
    char buffer[4096];
    while (true) {
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
                             deadline - std::chrono::steady_clock::now())
                             .count();
        if (remaining <= 0) {
            timed_out = true;
            break;
        }
        struct pollfd pfd{fds[0], POLLIN, 0};
        int ready = poll(&pfd, 1, static_cast<int>(remaining));
        if (ready <= 0) {
            timed_out = ready == 0;
            if (timed_out) break;
            continue;  // EINTR
        }
        ssize_t got = read(fds[0], buffer, sizeof buffer);
        if (got <= 0) break;  // EOF: worker finished
        output.append(buffer, static_cast<std::size_t>(got));
    }
    close(fds[0]);
    if (timed_out) kill(pid, SIGKILL);
    int status = 0;
    waitpid(pid, &status, 0);

    if (timed_out || output.empty()) {
        fallback.timed_out = timed_out;
        fallback.times.total_ms = timeout_s * 1000.0;
        if (!timed_out) fallback.error = "worker produced no output";
        return fallback;
    }
    try {
        return BenchRecord::from_json(nlohmann::json::parse(output));
    } catch (const std::exception& e) {
        fallback.error = std::string("bad worker output: ") + e.what();
        return fallback;
    }
}

}  // namespace detail

struct BenchOptions {
    double timeout_s = 1000.0;
    bool isolate = true;  // fork one worker per instance
};

/// Runs every (spec, algorithm) cell of the grid, each in a fresh manager
/// (and, by default, a fresh process). Timeouts are recorded per instance
/// and never abort the grid.
inline std::vector<BenchRecord> run_bench(const std::vector<CounterGameSpec>& grid,
                                          const std::vector<std::string>& algorithms,
                                          const BenchOptions& options = {}) {
    std::vector<BenchRecord> records;
    records.reserve(grid.size() * algorithms.size());
    for (const CounterGameSpec& spec : grid) {
        for (const std::string& algorithm : algorithms) {
            records.push_back(options.isolate
                                  ? detail::run_bench_instance_forked(
                                        spec, algorithm, options.timeout_s)
                                  : run_bench_instance(spec, algorithm));
        }
    }
    return records;
}

inline std::vector<CounterGameSpec> counter_grid(int n_max, int k_max) {
    std::vector<CounterGameSpec> grid;
    for (int n = 1; n <= n_max; ++n)
        for (int k = 1; k <= k_max; ++k) grid.push_back({n, k});
    return grid;
}

}  // namespace besynth
