#include "hinge_cli/cli.hpp"

int main(int argc, char** argv) { return hinge::cli::run_cli(argc, argv); }
