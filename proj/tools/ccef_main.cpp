#include "ccef/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return ccef::cli::run(argc, argv, std::cout, std::cerr);
}
