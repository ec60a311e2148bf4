#include <iostream>
#include <string>
#include <vector>

#include "legsynth/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return legsynth::run_cli(args, std::cout, std::cerr);
}
