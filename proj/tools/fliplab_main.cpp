#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return fliplab::cli::main_with(argc, argv, std::cout, std::cerr); }
