#include "fluidlab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fluidlab::cli_main(argc, argv, std::cout, std::cerr); }
