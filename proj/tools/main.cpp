#include "etpa/cli.hpp"

int main(int argc, char** argv) { return etpa::run_cli(argc, argv); }
