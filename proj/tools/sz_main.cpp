#include "sz/cli.hpp"

int main(int argc, char** argv) { return sz::cli::run(argc, argv); }
