#include <iostream>
#include <string>
#include <vector>

#include "grouprand/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return grouprand::cli_dispatch(args, std::cout, std::cerr);
}
