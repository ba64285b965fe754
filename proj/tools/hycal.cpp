#include <iostream>

#include "hycal/cli.hpp"

int main(int argc, char** argv) { return hycal::cli_main(argc, argv, std::cout, std::cerr); }
