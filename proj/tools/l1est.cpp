#include "l1est/cli.hpp"

int main(int argc, char** argv) { return l1est::cli_main(argc, argv); }
