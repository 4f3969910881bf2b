#include <shearlab/cli.hpp>

int main(int argc, char** argv) { return shearlab::cli::main(argc, argv); }
