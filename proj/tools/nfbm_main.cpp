#include <iostream>

#include "nfbm/cli.hpp"

int main(int argc, char** argv) { return nfbm::run_cli(argc, argv, std::cout, std::cerr); }
