#include <iostream>

#include "wkbsolve/cli.hpp"

int main(int argc, char** argv) { return wkb::cli::run(argc, argv, std::cout, std::cerr); }
