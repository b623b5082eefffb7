#include "radcompat/report/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return radcompat::report::run_cli(argc, argv, std::cout, std::cerr);
}
