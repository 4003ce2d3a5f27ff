#include <iostream>

#include "lcodr/cli.hpp"

int main(int argc, char** argv) { return lcodr::cli::run(argc, argv, std::cout, std::cerr); }
