#include "griff/cli.hpp"

int main(int argc, char** argv) { return griff::runCli(argc, argv); }
