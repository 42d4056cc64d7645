#include <iostream>

#include "asgmkg/cli.hpp"

int main(int argc, char** argv) { return asgmkg::run_cli(argc, argv, std::cout, std::cerr); }
