#include "dunkl/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dunkl::run_cli(argc, argv, std::cout, std::cerr); }
