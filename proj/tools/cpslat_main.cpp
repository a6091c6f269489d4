#include <iostream>
#include <string>
#include <vector>

#include "cpslat/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return cpslat::cli::run(args, std::cout, std::cerr);
}
