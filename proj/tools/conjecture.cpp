#include <string>
#include <vector>

#include "conjecturing/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return conjecturing::cli::run_cli(args);
}
