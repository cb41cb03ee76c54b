#include <iostream>

#include "nugap/cli.hpp"

int main(int argc, char** argv) { return nugap::cli::run(argc, argv, std::cout, std::cerr); }
