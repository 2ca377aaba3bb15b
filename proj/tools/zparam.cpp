#include "zparam/cli.hpp"

int main(int argc, char** argv) { return zparam::cli::cli_main(argc, argv); }
