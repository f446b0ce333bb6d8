#include "flagwave/cli.hpp"

int main(int argc, char** argv) { return flagwave::run_cli(argc, argv); }
