#include "orbmod/cli.hpp"

int main(int argc, char** argv) { return orbmod::cli::run(argc, argv); }
