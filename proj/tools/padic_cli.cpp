#include "padic/cli.hpp"

int main(int argc, char** argv) { return padic::cli::main(argc, argv); }
