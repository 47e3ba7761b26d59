#include <iostream>

#include "polya/cli.hpp"

int main(int argc, char** argv) { return polya::cli::dispatch(argc, argv, std::cout, std::cerr); }
