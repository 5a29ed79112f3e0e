#include "aerobat/cli/commands.hpp"

int main(int argc, char** argv) { return aerobat::cli::run(argc, argv); }
