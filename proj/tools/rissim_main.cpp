#include <string>
#include <vector>

#include "rissim/cli.hpp"

int main(int argc, char** argv) {
    return rissim::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
