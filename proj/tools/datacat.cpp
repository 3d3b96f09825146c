#include <iostream>

#include "datacat/cli.hpp"

int main(int argc, char** argv) { return datacat::cli::run(argc, argv, std::cout, std::cerr); }
