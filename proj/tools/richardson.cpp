#include <iostream>

#include "richardson/cli.hpp"

int main(int argc, char** argv) { return richardson::cli::run(argc, argv, std::cout, std::cerr); }
