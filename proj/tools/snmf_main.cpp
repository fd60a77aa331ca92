#include <iostream>

#include "snmf/cli.hpp"

int main(int argc, char** argv) { return snmf::run_cli(argc, argv, std::cout, std::cerr); }
