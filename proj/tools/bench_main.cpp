#include <iostream>

#include "samplesort/bench.hpp"

int main(int argc, char** argv) {
    return samplesort::bench::run_cli(argc, argv, std::cout, std::cerr);
}
