#include "copmarkov/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return copmarkov::run_cli(argc, argv, std::cout, std::cerr);
}
