#include <iostream>

#include "ppmchart/gateway.hpp"

int main(int argc, char** argv) { return ppmchart::cli_main(argc, argv, std::cout, std::cerr); }
