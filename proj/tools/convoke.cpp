#include <vector>

#include "convoke/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return convoke::run_cli(args);
}
