#include <iostream>

#include "hillgreen/cli.hpp"

int main(int argc, char** argv) { return hillgreen::cli::main(argc, argv, std::cout, std::cerr); }
