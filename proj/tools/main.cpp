#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return l1tucker::cli::run(argc, argv, std::cout, std::cerr); }
