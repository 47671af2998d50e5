#include "pmod2/cli.hpp"

int main(int argc, char** argv) { return pmod2::cli::run(argc, argv); }
