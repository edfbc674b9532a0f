#include <iostream>

#include "circlekit/cli/run.hpp"

int main(int argc, char** argv) { return circlekit::run_cli(argc, argv, std::cout, std::cerr); }
