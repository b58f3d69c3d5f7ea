#include "ares/cli.hpp"

int main(int argc, char** argv) { return ares::cli_main(argc, argv); }
