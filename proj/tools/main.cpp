#include "cli_lib.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return discovery::cli::run(args, std::cout, std::cerr);
}
