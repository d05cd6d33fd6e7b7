#include "noether/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return noether::cli::run(argc, argv, std::cout, std::cerr); }
