#include "bwflow/cli.hpp"

int main(int argc, char** argv) { return bwflow::cli::run(argc, argv); }
