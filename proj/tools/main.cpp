#include "crowdkit/cli/cli.hpp"

int main(int argc, char** argv) { return crowdkit::run_cli(argc, argv); }
