#include <iostream>

#include "magpol/cli.hpp"

int main(int argc, char** argv) { return magpol::cli::run(argc, argv, std::cout, std::cerr); }
