#include "sdrep/cli.hpp"

int main(int argc, char** argv) { return sdrep::cli_main(argc, argv); }
