#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return iocpqa::tools::main_cli(argc, argv, std::cout, std::cerr); }
