#include <iostream>

#include "xtalk_cli/commands.hpp"

int main(int argc, char** argv) { return xtalk::cli::run(argc, argv, std::cout, std::cerr); }
