#include "rkdet/cli.hpp"

int main(int argc, char** argv) { return rkdet::cli_main(argc, argv); }
