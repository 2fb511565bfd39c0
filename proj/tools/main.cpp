#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return v2vlos::cli::run(argc, argv, std::cout, std::cerr);
}
