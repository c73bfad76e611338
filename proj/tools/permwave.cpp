#include "permwave/cli.hpp"

int main(int argc, char** argv) { return permwave::cli::run(argc, argv); }
