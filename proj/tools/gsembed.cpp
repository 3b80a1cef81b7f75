#include <iostream>
#include <string>
#include <vector>

#include "gsembed/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return gsembed::cli::run(args, std::cout, std::cerr);
}
