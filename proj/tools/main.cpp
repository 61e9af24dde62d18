#include "nsfem/cli.hpp"

int main(int argc, char** argv) { return nsfem::cli_main(argc, argv); }
