#include <iostream>

#include "speedprior/cli.hpp"

int main(int argc, char** argv) { return speedprior::cli::run(argc, argv, std::cout, std::cerr); }
