#include <iostream>

#include "studymap/cli.hpp"

int main(int argc, char** argv) {
    return studymap::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
