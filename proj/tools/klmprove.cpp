#include <iostream>

#include "klm/query.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return klm::cli_main(args, std::cout, std::cerr);
}
