#include "pomset/cli.hpp"

int main(int argc, char** argv) { return pomset::cli::run(argc, argv); }
