#include "brackets/cli.hpp"

int main(int argc, char** argv) { return brackets::cli::cli_main(argc, argv); }
