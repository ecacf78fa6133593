#include <iostream>
#include <string>
#include <vector>

#include <riccfam/cli.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return riccfam::cli::run(args, std::cout, std::cerr);
}
