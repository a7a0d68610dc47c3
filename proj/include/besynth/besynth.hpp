#pragma once

// Umbrella header for the whole library.

#include "besynth/bdd.hpp"
#include "besynth/bench.hpp"
#include "besynth/cli.hpp"
#include "besynth/counter_game.hpp"
#include "besynth/dfa_ops.hpp"
#include "besynth/errors.hpp"
#include "besynth/explicit_dfa.hpp"
#include "besynth/formula.hpp"
#include "besynth/games.hpp"
#include "besynth/minimize.hpp"
#include "besynth/parser.hpp"
#include "besynth/partition.hpp"
#include "besynth/pipelines.hpp"
#include "besynth/printer.hpp"
#include "besynth/semantics.hpp"
#include "besynth/symbolic_dfa.hpp"
#include "besynth/transducer.hpp"
#include "besynth/translate.hpp"
#include "besynth/validate.hpp"
