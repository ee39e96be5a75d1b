#include <iostream>

#include "gsteady/cli.h"

int main(int argc, char** argv) { return gsteady::run_cli(argc, argv, std::cout, std::cerr); }
