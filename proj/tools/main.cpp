#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dpda::cli_main(argc, argv, std::cout, std::cerr); }
