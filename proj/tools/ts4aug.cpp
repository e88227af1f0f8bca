#include "ts4/commands.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return ts4::cli::run(argc, argv, std::cout, std::cerr);
}
