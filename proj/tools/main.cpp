#include <iostream>

#include "volterra/cli.hpp"

int main(int argc, char** argv) { return volterra::cli_dispatch(argc, argv, std::cout, std::cerr); }
