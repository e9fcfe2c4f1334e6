#include <iostream>

#include "tsms/cli.hpp"

int main(int argc, char** argv) { return tsms::run_cli(argc, argv, std::cout, std::cerr); }
