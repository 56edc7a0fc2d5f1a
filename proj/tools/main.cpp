#include <iostream>

#include "bcnobs/cli.hpp"

int main(int argc, char** argv) { return bcnobs::run_cli(argc, argv, std::cout, std::cerr); }
