#include "whs/cli.hpp"

int main(int argc, char** argv) { return whs::run_cli(argc, argv); }
