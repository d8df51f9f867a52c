#include <iostream>

#include "visionflow/interface/cli.hpp"

int main(int argc, char** argv) { return visionflow::interface::run_cli(argc, argv, std::cout, std::cerr); }
