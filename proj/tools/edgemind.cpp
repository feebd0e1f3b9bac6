#include "edgemind/cli/cli.hpp"

int main(int argc, char** argv) { return edgemind::cli::main(argc, argv); }
