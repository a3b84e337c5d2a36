#include <iostream>

#include "guplab/commands.hpp"

int main(int argc, char** argv) { return guplab::run_cli(argc, argv, std::cout, std::cerr); }
