#include "ringab/cli_io.hpp"

int main(int argc, char** argv) { return ringab::run_cli(argc, argv); }
