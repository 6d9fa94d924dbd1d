#include <iostream>

#include "sparsebell_cli/cli.hpp"

int main(int argc, char** argv) { return sparsebell::cli::run_cli(argc, argv, std::cout, std::cerr); }
