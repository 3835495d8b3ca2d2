#include <iostream>

#include "sylo/cli/commands.hpp"

int main(int argc, char** argv) { return sylo::cli::run_cli(argc, argv, std::cout, std::cerr); }
