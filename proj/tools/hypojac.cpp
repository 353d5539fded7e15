#include "hypojac/cli.hpp"

int main(int argc, char** argv) { return hypojac::cli::run(argc, argv); }
