/// @file qrpsm_main.cpp
/// @brief Thin executable wrapper around cli_main.

#include <iostream>

#include "qrpsm/cli.hpp"

int main(int argc, char** argv) { return qrpsm::cli_main(argc, argv, std::cout); }
