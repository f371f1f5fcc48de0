#include <iostream>

#include "oscmono/cli.hpp"

int main(int argc, char** argv) { return oscmono::cli::run(argc, argv, std::cout, std::cerr); }
