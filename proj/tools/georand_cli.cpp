#include "cli.hpp"

int main(int argc, char** argv) { return georand::cli::run(argc, argv); }
