#include "fairssl/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return fairssl::dispatch(argc, argv, std::cout, std::cerr); }
