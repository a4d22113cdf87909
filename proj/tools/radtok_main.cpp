#include <iostream>

#include "radtok/cli.hpp"

int main(int argc, char** argv) { return radtok::cli::run(argc, argv, std::cout, std::cerr); }
