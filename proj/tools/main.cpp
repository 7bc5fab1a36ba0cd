#include <iostream>
#include <string>
#include <vector>

#include "stereoloc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return stereoloc::cli::run(args, std::cout, std::cerr);
}
