#include <catch2/catch_amalgamated.hpp>

#include "besynth/parser.hpp"
#include "besynth/printer.hpp"
#include "besynth/translate.hpp"
#include "support/oracles.hpp"
#include "support/random_gen.hpp"

using namespace besynth;

namespace {

FormulaStore make_store() { return FormulaStore(Partition({"a"}, {"b"})); }

}  // namespace

TEST_CASE("translate eventually-a", "[translate]") {
    auto store = make_store();
    ExplicitDfa dfa = translate(store, parse_formula(store, "F a"));
    dfa.check_well_formed();

    // Two states: a non-final initial looping while a is absent, and a final
    // absorbing state once a occurs.
    REQUIRE(dfa.state_count == 2);
    REQUIRE(!dfa.finals[dfa.initial]);
    const Letter A = 1;
    REQUIRE(dfa.next(dfa.initial, 0) == dfa.initial);
    REQUIRE(dfa.next(dfa.initial, 2) == dfa.initial);
    std::uint32_t hit = dfa.next(dfa.initial, A);
    REQUIRE(hit != dfa.initial);
    REQUIRE(dfa.finals[hit]);
    REQUIRE(dfa.next(hit, 0) == hit);
    REQUIRE(dfa.next(hit, A) == hit);

    REQUIRE(test::is_minimal_dfa(dfa));
}

TEST_CASE("translate constants", "[translate]") {
    auto store = make_store();

    ExplicitDfa top = translate(store, store.tt());
    REQUIRE(top.state_count == 1);
    REQUIRE(top.finals[0]);

    ExplicitDfa bottom = translate(store, parse_formula(store, "a && !a"));
    REQUIRE(bottom.state_count == 1);
    REQUIRE(!bottom.finals[0]);
}

TEST_CASE("translate accepts agrees with evaluate on samples", "[translate]") {
    auto store = make_store();
    ExplicitDfa dfa = translate(store, parse_formula(store, "F a"));
    REQUIRE(accepts(dfa, {1}));
    REQUIRE(!accepts(dfa, {0, 0}));
    REQUIRE(accepts(dfa, {0, 0, 1, 0}));
}

TEST_CASE("translate respects the state cap", "[translate]") {
    auto store = make_store();
    TranslateOptions options;
    options.state_cap = 1;
    REQUIRE_THROWS_AS(translate(store, parse_formula(store, "F(a && X b)"), options),
                      ResourceLimitError);
}

TEST_CASE("translation soundness on random formulas", "[translate][property]") {
    Partition partition({"a"}, {"b", "c"});
    std::mt19937 rng(17);
    for (int round = 0; round < 60; ++round) {
        FormulaStore store(partition);
        FormulaId f = test::random_formula(store, rng, 6);
        ExplicitDfa dfa = translate(store, f);
        bool ok = test::for_each_trace(3, 5, [&](const Trace& trace) {
            return accepts(dfa, trace) == evaluate(store, f, trace, 0);
        });
        if (!ok) INFO("formula: " << print_formula(store, f));
        REQUIRE(ok);
    }
}

TEST_CASE("translate output is minimal", "[translate][property]") {
    Partition partition({"a"}, {"b"});
    std::mt19937 rng(19);
    for (int round = 0; round < 40; ++round) {
        FormulaStore store(partition);
        FormulaId f = test::random_formula(store, rng, 5);
        ExplicitDfa dfa = translate(store, f);
        if (dfa.state_count <= 64) {
            INFO("formula: " << print_formula(store, f));
            REQUIRE(test::is_minimal_dfa(dfa));
        }
    }
}
