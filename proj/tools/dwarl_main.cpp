#include "dwarl/cli.hpp"

int main(int argc, char** argv) { return dwarl::run_cli(argc, argv); }
