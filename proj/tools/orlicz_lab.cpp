#include <iostream>
#include <string>
#include <vector>

#include "orlicz/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return orlicz::cli::run(args, std::cout, std::cerr);
}
