#include <iostream>

#include "nhsw/cli.hpp"

int main(int argc, char** argv) { return nhsw::cli::run_cli(argc, argv, std::cout, std::cerr); }
