#include <iostream>

#include "tcmap/cli.hpp"

int main(int argc, char** argv) { return tcmap::cli::run(argc, argv, std::cout, std::cerr); }
