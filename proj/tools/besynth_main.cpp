#include "besynth/cli.hpp"

int main(int argc, char** argv) { return besynth::run_cli(argc, argv); }
