#include <iostream>

#include "gpt/cli.hpp"

int main(int argc, char** argv) { return gpt::cli::run(argc, argv, std::cout, std::cerr); }
