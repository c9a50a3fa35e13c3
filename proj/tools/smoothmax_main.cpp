#include <iostream>

#include "smoothmax/cli/commands.hpp"

int main(int argc, char** argv) {
    return smoothmax::cli::run_main(argc, argv, std::cout, std::cerr);
}
