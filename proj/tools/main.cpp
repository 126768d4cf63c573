#include <iostream>

#include "vcsched/cli.hpp"

int main(int argc, char** argv) { return vcsched::run_cli(argc, argv, std::cout, std::cerr); }
