#include <iostream>

#include "evlab/cli.hpp"

int main(int argc, char** argv) {
    return evlab::cli::run(argc, argv, std::cout, std::cerr);
}
