#include "cli.hpp"

int main(int argc, char** argv) { return musicmood::cli::main(argc, argv); }
