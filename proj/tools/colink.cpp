#include "colink/pipeline.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return colink::run_cli(argc, argv, std::cout, std::cerr);
}
