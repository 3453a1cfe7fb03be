#include <iostream>
#include <string>
#include <vector>

#include "freelevy/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return freelevy::run_cli(args, std::cout, std::cerr);
}
