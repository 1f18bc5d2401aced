#include <iostream>

#include "qcbnorm_cli/commands.hpp"

int main(int argc, char** argv) { return qcbnorm::cli::run(argc, argv, std::cout, std::cerr); }
