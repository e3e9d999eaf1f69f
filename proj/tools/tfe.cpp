#include <iostream>

#include "tfe/cli.hpp"

int main(int argc, char** argv) { return tfe::cli::run(argc, argv, std::cout, std::cerr); }
