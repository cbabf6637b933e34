#include <iostream>

#include "sparsekit/cli.hpp"

int main(int argc, char** argv) { return sparsekit::cli::run(argc, argv, std::cout, std::cerr); }
