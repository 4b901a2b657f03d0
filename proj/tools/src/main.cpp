#include <iostream>

#include "rotlab_cli/cli.hpp"

int main(int argc, char** argv) { return rotlab::cli::run(argc, argv, std::cout, std::cerr); }
