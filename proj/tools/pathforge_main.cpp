#include <iostream>

#include "pathforge/cli_io.hpp"

int main(int argc, char** argv) { return pathforge::io::cli_dispatch(argc, argv, std::cout, std::cerr); }
