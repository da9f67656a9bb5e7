#include <string>
#include <vector>

#include "coexsim/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return coexsim::cli::run(args);
}
