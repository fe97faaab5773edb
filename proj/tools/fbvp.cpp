#include <iostream>

#include "fbvp/cli.hpp"

int main(int argc, char** argv) { return fbvp::cli::run(argc, argv, std::cout, std::cerr); }
