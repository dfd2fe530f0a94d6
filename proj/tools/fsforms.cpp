#include <iostream>

#include "fsforms/cli/cli.hpp"

int main(int argc, char** argv) { return fsforms::cli::run(argc, argv, std::cout, std::cerr); }
