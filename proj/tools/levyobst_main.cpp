#include <string>
#include <vector>

#include "levyobst/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return levyobst::run_cli(args);
}
