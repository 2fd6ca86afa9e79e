#include <iostream>

#include "irv/cli.h"

int main(int argc, char** argv) {
    return irv::run_cli(argc, argv, std::cout, std::cerr);
}
