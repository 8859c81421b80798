#include "uqsim/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return uqsim::cli::run(argc, argv, std::cout, std::cerr); }
