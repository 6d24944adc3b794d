#include <iostream>

#include "xling_cli.hpp"

int main(int argc, char** argv) { return xling::cli::run_cli(argc, argv, std::cout, std::cerr); }
