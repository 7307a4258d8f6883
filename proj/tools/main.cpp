#include "ilo_cli.hpp"

int main(int argc, char** argv) { return ilo::cli::run_cli(argc, argv, std::cout, std::cerr); }
