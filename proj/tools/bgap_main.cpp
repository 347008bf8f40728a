#include "cli.hpp"

int main(int argc, char** argv) { return bgap::cli::run(argc, argv); }
