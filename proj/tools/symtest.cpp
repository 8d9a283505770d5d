#include "symtest/cli.hpp"

int main(int argc, char** argv) { return symtest::cli::run(argc, argv); }
