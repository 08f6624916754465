#include <string>
#include <vector>

#include "hhlab/cli.hpp"

int main(int argc, char** argv) {
    return hhlab::run_cli(std::vector<std::string>(argv, argv + argc));
}
