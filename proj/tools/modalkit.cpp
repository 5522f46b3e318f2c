#include <iostream>

#include "modalkit/cli.hpp"

int main(int argc, char** argv) { return modalkit::run_cli(argc, argv, std::cout, std::cerr); }
