#include <iostream>

#include "twisted/cli.hpp"

int main(int argc, char** argv) { return twisted::cli::run(argc, argv, std::cout, std::cerr); }
