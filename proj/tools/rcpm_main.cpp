#include <iostream>

#include "rcpm/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rcpm::run_cli(args, std::cout, std::cerr);
}
