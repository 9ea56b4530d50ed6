#include <iostream>

#include "patsched/cli.hpp"

int main(int argc, char** argv) {
    return patsched::cli::main(argc, argv, std::cout, std::cerr);
}
