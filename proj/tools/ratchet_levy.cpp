#include <iostream>

#include "ratchet_levy/cli.hpp"

int main(int argc, char** argv)
{
    return ratchet_levy::cli::run_cli(argc, argv, std::cout, std::cerr);
}
