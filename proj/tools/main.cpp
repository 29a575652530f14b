#include "emosphere/cli.hpp"

int main(int argc, char** argv) { return emosphere::cli::run(argc, argv); }
