#include <iostream>
#include <string>
#include <vector>

#include "ecpe/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return ecpe::run_cli(args, std::cout, std::cerr);
}
