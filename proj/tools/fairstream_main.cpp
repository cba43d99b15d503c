#include <iostream>

#include "fairstream/cli.hpp"

int main(int argc, char** argv) { return fairstream::cli::run_cli(argc, argv, std::cout, std::cerr); }
