#include "cli.hpp"

int main(int argc, char** argv) { return blmac::cli::run_cli(argc, argv); }
