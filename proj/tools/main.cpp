#include "liouspec/cli/run.hpp"

int main(int argc, char** argv) { return liouspec::cli::run_cli(argc, argv); }
