#include <iostream>

#include "seqfrac/cli.hpp"

int main(int argc, char** argv)
{
    return seqfrac::cli::parse_and_dispatch(argc, argv, std::cout, std::cerr);
}
