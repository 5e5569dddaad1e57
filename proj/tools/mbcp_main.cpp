#include <iostream>

#include "mbcp/cli.hpp"

int main(int argc, char** argv) { return mbcp::cli::run(argc, argv, std::cout, std::cerr); }
