#include <iostream>

#include "birdeg/cli.hpp"

int main(int argc, char** argv) { return birdeg::cli::run(argc, argv, std::cout, std::cerr); }
