#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return fdshock::cli::dispatch(argc, argv, std::cout, std::cerr);
}
