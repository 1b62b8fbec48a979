#include <iostream>

#include "wallgp/cli.hpp"

int main(int argc, char** argv) { return wallgp::cli::run(argc, argv, std::cout, std::cerr); }
