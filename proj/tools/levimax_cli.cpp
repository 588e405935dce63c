#include <iostream>

#include "levimax/cli.hpp"

int main(int argc, char** argv) { return levimax::cli::run(argc, argv, std::cout, std::cerr); }
