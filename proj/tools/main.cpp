#include "nls/cli.hpp"

int main(int argc, char** argv) { return nls::cli::main(argc, argv); }
