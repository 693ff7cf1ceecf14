#include "caplab/cli.hpp"

int main(int argc, char** argv) { return caplab::cli::run(argc, argv); }
