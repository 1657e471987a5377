#include <iostream>

#include "pgraph_cli.hpp"

int main(int argc, char** argv) { return pgraph::cli::run(argc, argv, std::cout, std::cerr); }
