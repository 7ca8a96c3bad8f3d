#include "shootbvp/cli.hpp"

int main(int argc, char** argv) { return shootbvp::cli::run(argc, argv); }
