#include <iostream>
#include <string>
#include <vector>

#include "dmclock/cli/commands.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dmclock::cli::run(std::move(args), std::cout, std::cerr);
}
