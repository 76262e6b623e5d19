#include "varns/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return varns::cli::run(argc, argv, std::cout, std::cerr); }
